#include "burstcoord/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "burstcoord/errors.hpp"
#include "burstcoord/heavytail.hpp"
#include "burstcoord/pipeline.hpp"
#include "burstcoord/rng.hpp"
#include "burstcoord/run_io.hpp"
#include "burstcoord/text_io.hpp"

namespace burstcoord {

std::string to_string(Detector d) {
  switch (d) {
    case Detector::bursty:
      return "bursty";
    case Detector::louvain_edges:
      return "louvain_edges";
    case Detector::lpa_edges:
      return "lpa_edges";
    case Detector::shuffled:
      return "shuffled";
  }
  return "unknown";
}

Detector parse_detector(std::string_view name) {
  for (auto d : {Detector::bursty, Detector::louvain_edges, Detector::lpa_edges,
                 Detector::shuffled}) {
    if (to_string(d) == name) return d;
  }
  throw InputError("unknown detector '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
  if (lambda_grid.empty()) throw InputError("lambda_grid: must be non-empty");
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] >= 0.0 && lambda_grid[i] <= 1.0)) {
      throw InputError("lambda_grid: values must lie in [0,1]");
    }
    if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1])) {
      throw InputError("lambda_grid: values must be unique and sorted ascending");
    }
  }
  if (replicates == 0) throw InputError("replicates: must be at least 1");
  if (detectors.empty() && !degfit) throw InputError("detectors: must be non-empty");
  std::set<Detector> seen(detectors.begin(), detectors.end());
  if (seen.size() != detectors.size()) throw InputError("detectors: duplicate entry");
  if (!(resolution > 0.0)) throw InputError("resolution: must be positive");
  if (min_events < 2) throw InputError("min_events: must be at least 2");
  BcsbmParams probe = generator;
  probe.lambda = 0.0;
  probe.validate();
}

SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("sweep spec: expected a JSON object");
  static const std::set<std::string> known{
      "lambda_grid", "replicates",    "base_seed", "detectors", "generator",    "resolution",
      "min_events",  "transform",     "lpa_max_iters", "degfit", "total_degree", "workers"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw InputError(key + ": unknown sweep spec field");
  }
  SweepSpec s;
  auto get = [&]<typename T>(const char* name, T& out) {
    if (!j.contains(name)) return;
    try {
      out = j.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw InputError(std::string(name) + ": invalid value");
    }
  };
  get("lambda_grid", s.lambda_grid);
  get("replicates", s.replicates);
  get("base_seed", s.base_seed);
  if (j.contains("detectors")) {
    std::vector<std::string> names;
    get("detectors", names);
    s.detectors.clear();
    for (const auto& n : names) s.detectors.push_back(parse_detector(n));
  }
  if (j.contains("generator")) {
    nlohmann::json g = j["generator"];
    if (!g.is_object()) throw InputError("generator: expected an object");
    if (!g.contains("lambda")) g["lambda"] = 0.0;
    s.generator = params_from_json(g);
  }
  get("resolution", s.resolution);
  get("min_events", s.min_events);
  if (j.contains("transform")) {
    std::string t;
    get("transform", t);
    s.transform = WeightTransform::parse(t);
  }
  get("lpa_max_iters", s.lpa_max_iters);
  get("degfit", s.degfit);
  get("total_degree", s.total_degree);
  get("workers", s.workers);
  s.validate();
  return s;
}

nlohmann::ordered_json sweep_spec_to_json(const SweepSpec& s) {
  nlohmann::ordered_json j;
  j["lambda_grid"] = s.lambda_grid;
  j["replicates"] = s.replicates;
  j["base_seed"] = s.base_seed;
  auto dets = nlohmann::ordered_json::array();
  for (auto d : s.detectors) dets.push_back(to_string(d));
  j["detectors"] = dets;
  auto g = params_to_json(s.generator);
  g.erase("lambda");
  g.erase("seed");
  j["generator"] = g;
  j["resolution"] = s.resolution;
  j["min_events"] = s.min_events;
  j["transform"] = s.transform.name();
  j["lpa_max_iters"] = s.lpa_max_iters;
  j["degfit"] = s.degfit;
  j["total_degree"] = s.total_degree;
  j["workers"] = s.workers;
  return j;
}

std::uint64_t cell_seed(std::uint64_t base, std::size_t lambda_index, std::size_t replicate) {
  return derive_seed(base, {static_cast<std::uint64_t>(lambda_index),
                            static_cast<std::uint64_t>(replicate)});
}

namespace {

struct CellOutput {
  std::vector<SweepRow> rows;
  std::optional<DegfitRow> degfit;
  std::optional<std::string> error;
};

CellOutput run_cell(const SweepSpec& spec, std::size_t li, std::size_t rep) {
  CellOutput out;
  const double lambda = spec.lambda_grid[li];
  const std::uint64_t seed = cell_seed(spec.base_seed, li, rep);
  BcsbmParams params = spec.generator;
  params.lambda = lambda;
  params.seed = seed;
  const auto run = simulate(params);
  const double intra = intra_edge_fraction(run);

  std::vector<std::string> ids;
  for (std::size_t v = 0; v < params.n; ++v) ids.push_back(node_id(v));
  const NamedPartition truth = name_partition(ids, run.ground_truth());

  std::optional<Detection> bursty;
  auto bursty_detection = [&]() -> const Detection& {
    if (!bursty) {
      DetectOptions opt;
      opt.profile.min_events = spec.min_events;
      opt.transform = spec.transform;
      opt.resolution = spec.resolution;
      opt.seed = seed;
      bursty = detect_bursty(EventLog(run.activity_log, Window{}), opt);
    }
    return *bursty;
  };
  std::optional<WeightedGraph> data_plane;
  auto data_plane_graph = [&]() -> const WeightedGraph& {
    if (!data_plane) data_plane = aggregate_snapshots(params.n, run.snapshots);
    return *data_plane;
  };

  for (auto detector : spec.detectors) {
    SweepRow row{lambda, rep, detector, 0.0, 0.0, intra};
    switch (detector) {
      case Detector::bursty: {
        const auto aligned = align_partitions(bursty_detection().named(), truth);
        row.nmi = nmi(aligned.predicted, aligned.truth);
        row.ari = ari(aligned.predicted, aligned.truth);
        break;
      }
      case Detector::shuffled: {
        auto aligned = align_partitions(bursty_detection().named(), truth);
        Rng rng(derive_seed(seed, {0x5eedULL}));
        rng.shuffle(aligned.truth.labels);
        row.nmi = nmi(aligned.predicted, aligned.truth);
        row.ari = ari(aligned.predicted, aligned.truth);
        break;
      }
      case Detector::louvain_edges: {
        const auto p = louvain(data_plane_graph(), {spec.resolution, seed, false}).partition;
        row.nmi = nmi(p, run.ground_truth());
        row.ari = ari(p, run.ground_truth());
        break;
      }
      case Detector::lpa_edges: {
        const auto p = label_propagation(data_plane_graph(), seed, spec.lpa_max_iters).partition;
        row.nmi = nmi(p, run.ground_truth());
        row.ari = ari(p, run.ground_truth());
        break;
      }
    }
    out.rows.push_back(row);
  }

  if (spec.degfit) {
    const auto degrees = snapshot_degrees(params.n, run.snapshots, spec.total_degree);
    const auto report = classify_network(degrees);
    DegfitRow d;
    d.lambda = lambda;
    d.seed = seed;
    d.eligible = report.eligible;
    d.winner = report.winner;
    for (const auto& c : report.comparisons) {
      switch (c.against) {
        case TailModel::power_law:
          d.llr_pl = c.result.llr;
          d.p_pl = c.result.p_value;
          break;
        case TailModel::log_normal:
          d.llr_ln = c.result.llr;
          d.p_ln = c.result.p_value;
          break;
        case TailModel::exponential:
          d.llr_exp = c.result.llr;
          d.p_exp = c.result.p_value;
          break;
        case TailModel::truncated_power_law:
          break;
      }
    }
    out.degfit = d;
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t cells = spec.lambda_grid.size() * spec.replicates;
  std::vector<CellOutput> outputs(cells);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t c = next++; c < cells; c = next++) {
      const std::size_t li = c / spec.replicates;
      const std::size_t rep = c % spec.replicates;
      try {
        outputs[c] = run_cell(spec, li, rep);
      } catch (const std::exception& e) {
        outputs[c].rows.clear();
        outputs[c].degfit.reset();
        outputs[c].error = e.what();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(spec.workers, cells));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  // Cells are stored by index, so the assembled order is independent of
  // completion order.
  SweepResult result;
  for (std::size_t c = 0; c < cells; ++c) {
    auto& o = outputs[c];
    if (o.error) {
      result.failures.push_back({spec.lambda_grid[c / spec.replicates], c % spec.replicates, *o.error});
      continue;
    }
    result.rows.insert(result.rows.end(), o.rows.begin(), o.rows.end());
    if (o.degfit) result.degfit.push_back(*o.degfit);
  }
  return result;
}

std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "lambda,replicate,detector,nmi,ari,intra_edge_fraction\n";
  for (const auto& r : rows) {
    out += text::format_double(r.lambda) + "," + std::to_string(r.replicate) + "," +
           to_string(r.detector) + "," + text::format_double(r.nmi) + "," +
           text::format_double(r.ari) + "," + text::format_double(r.intra_edge_fraction) + "\n";
  }
  return out;
}

namespace {

std::vector<std::vector<std::string>> csv_body(std::string_view text, std::string_view header) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  std::vector<std::vector<std::string>> rows;
  const auto expected = text::csv_split(header);
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    auto f = text::csv_split(line);
    if (!header_seen) {
      if (f != expected) throw InputError("line 1: expected header '" + std::string(header) + "'");
      header_seen = true;
      continue;
    }
    if (f.size() != expected.size()) {
      throw InputError("line " + std::to_string(lineno) + ": expected " +
                       std::to_string(expected.size()) + " fields");
    }
    rows.push_back(std::move(f));
  }
  if (!header_seen) throw InputError("missing header");
  return rows;
}

}  // namespace

std::vector<SweepRow> parse_sweep_csv(std::string_view text) {
  std::vector<SweepRow> rows;
  for (const auto& f :
       csv_body(text, "lambda,replicate,detector,nmi,ari,intra_edge_fraction")) {
    SweepRow r;
    r.lambda = text::parse_double(f[0], "lambda");
    r.replicate = static_cast<std::size_t>(text::parse_int(f[1], "replicate"));
    r.detector = parse_detector(f[2]);
    r.nmi = text::parse_double(f[3], "nmi");
    r.ari = text::parse_double(f[4], "ari");
    r.intra_edge_fraction = text::parse_double(f[5], "intra_edge_fraction");
    rows.push_back(r);
  }
  return rows;
}

std::string degfit_rows_to_csv(const std::vector<DegfitRow>& rows) {
  std::string out = "lambda,seed,eligible,winner,llr_pl,p_pl,llr_ln,p_ln,llr_exp,p_exp\n";
  for (const auto& r : rows) {
    out += text::format_double(r.lambda) + "," + std::to_string(r.seed) + "," +
           (r.eligible ? "true" : "false") + "," + r.winner + "," +
           text::format_double(r.llr_pl) + "," + text::format_double(r.p_pl) + "," +
           text::format_double(r.llr_ln) + "," + text::format_double(r.p_ln) + "," +
           text::format_double(r.llr_exp) + "," + text::format_double(r.p_exp) + "\n";
  }
  return out;
}

std::vector<DegfitRow> parse_degfit_csv(std::string_view text) {
  std::vector<DegfitRow> rows;
  for (const auto& f : csv_body(
           text, "lambda,seed,eligible,winner,llr_pl,p_pl,llr_ln,p_ln,llr_exp,p_exp")) {
    DegfitRow r;
    r.lambda = text::parse_double(f[0], "lambda");
    r.seed = static_cast<std::uint64_t>(std::stoull(f[1]));
    if (f[2] != "true" && f[2] != "false") throw InputError("eligible: expected true/false");
    r.eligible = f[2] == "true";
    r.winner = f[3];
    r.llr_pl = text::parse_double(f[4], "llr_pl");
    r.p_pl = text::parse_double(f[5], "p_pl");
    r.llr_ln = text::parse_double(f[6], "llr_ln");
    r.p_ln = text::parse_double(f[7], "p_ln");
    r.llr_exp = text::parse_double(f[8], "llr_exp");
    r.p_exp = text::parse_double(f[9], "p_exp");
    rows.push_back(r);
  }
  return rows;
}

nlohmann::ordered_json failures_to_json(const std::vector<CellFailure>& failures) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& f : failures) {
    nlohmann::ordered_json j;
    j["lambda"] = f.lambda;
    j["replicate"] = f.replicate;
    j["error"] = f.error;
    arr.push_back(j);
  }
  nlohmann::ordered_json out;
  out["failed_cells"] = arr;
  return out;
}

std::vector<SeriesPoint> summarize(const std::vector<SweepRow>& rows, Detector detector,
                                   bool use_ari) {
  std::map<double, std::vector<double>> by_lambda;
  for (const auto& r : rows) {
    if (r.detector == detector) by_lambda[r.lambda].push_back(use_ari ? r.ari : r.nmi);
  }
  std::vector<SeriesPoint> out;
  for (const auto& [lambda, values] : by_lambda) {
    SeriesPoint p;
    p.lambda = lambda;
    p.count = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    p.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - p.mean) * (v - p.mean);
      p.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace burstcoord
