#include "burstcoord/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "burstcoord/bcsbm.hpp"
#include "burstcoord/errors.hpp"
#include "burstcoord/event_io.hpp"
#include "burstcoord/heavytail.hpp"
#include "burstcoord/partition_io.hpp"
#include "burstcoord/pipeline.hpp"
#include "burstcoord/run_io.hpp"
#include "burstcoord/svg_plot.hpp"
#include "burstcoord/sweep.hpp"
#include "burstcoord/text_io.hpp"

namespace burstcoord::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
};

void info(const Globals& g, const std::string& msg) {
  if (!g.quiet) std::cerr << msg << "\n";
}

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": malformed JSON: " + e.what());
  }
}

// Writes to --out when given, stdout otherwise.
void emit(const Globals& g, const std::string& contents) {
  if (g.out.empty()) {
    std::cout << contents;
  } else {
    text::write_file(g.out, contents);
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  bool age_all = false;
  std::optional<std::size_t> domains;
  std::optional<double> lambda;
};

void cmd_simulate(const Globals& g, const SimulateArgs& a) {
  SimulateConfig config;
  if (!a.config.empty()) config = config_from_json(read_json_file(a.config));
  if (g.seed) config.params.seed = *g.seed;
  if (a.age_all) config.params.age_all = true;
  if (a.lambda) config.params.lambda = *a.lambda;
  if (a.domains) config.domains.n_domains = *a.domains;
  config.params.validate();
  if (g.out.empty()) throw InputError("--out: simulate needs an output directory");

  std::vector<TemporalGraphRun> runs;
  if (config.domains.n_domains == 1 && !a.domains) {
    runs.push_back(simulate(config.params));
  } else {
    runs = simulate_multi_domain(config.params, config.domains);
  }
  write_run_directory(g.out, config, runs);
  std::size_t fallbacks = 0;
  for (const auto& r : runs) fallbacks += r.uniform_source_fallbacks;
  info(g, "simulated " + std::to_string(runs.size()) + " domain(s), " +
              std::to_string(runs.front().edge_count()) + " edges each, intra-edge fraction " +
              text::format_double(intra_edge_fraction(runs.front())) +
              (fallbacks ? ", uniform source fallbacks " + std::to_string(fallbacks) : ""));
}

// ---- detect -----------------------------------------------------------------

struct DetectArgs {
  std::string events;
  std::string method = "bursty";
  std::string transform = "one_minus_ks";
  std::string sparsify = "none";
  double resolution = 1.0;
  std::size_t min_events = 5;
  bool keep_zero_gaps = false;
  bool cross_domain_only = false;
  double window_start = 0.0;
  std::optional<double> window_length;
  unsigned workers = 1;
  std::string graph_out;
};

void cmd_detect(const Globals& g, const DetectArgs& a) {
  if (a.method != "bursty") throw InputError("--method: only 'bursty' is supported");
  if (g.out.empty()) throw InputError("--out: detect needs an output file");
  DetectOptions opt;
  opt.profile.min_events = a.min_events;
  opt.profile.ties = a.keep_zero_gaps ? TiePolicy::keep_zeros : TiePolicy::collapse;
  opt.cross_domain_only = a.cross_domain_only;
  opt.transform = WeightTransform::parse(a.transform);
  opt.sparsify = Sparsify::parse(a.sparsify);
  opt.resolution = a.resolution;
  if (!(opt.resolution > 0.0)) throw InputError("--resolution: must be positive");
  opt.seed = g.seed.value_or(42);
  opt.workers = a.workers;

  Window window;
  window.begin = a.window_start;
  if (a.window_length) window.end = a.window_start + *a.window_length;
  const EventLog log(read_events(a.events), window);
  const auto detection = detect_bursty(log, opt);

  text::write_file(g.out, partition_to_csv(detection.named()));
  if (!a.graph_out.empty()) {
    text::write_file(a.graph_out, similarity_graph_to_csv(detection.graph));
  }

  nlohmann::ordered_json sidecar;
  sidecar["method"] = a.method;
  sidecar["events"] = a.events;
  sidecar["window"] = {window.begin, a.window_length ? nlohmann::ordered_json(window.end)
                                                     : nlohmann::ordered_json(nullptr)};
  sidecar["min_events"] = a.min_events;
  sidecar["tie_policy"] = a.keep_zero_gaps ? "keep_zeros" : "collapse";
  sidecar["cross_domain_only"] = a.cross_domain_only;
  sidecar["transform"] = opt.transform.name();
  sidecar["sparsify"] = opt.sparsify.name();
  sidecar["resolution"] = opt.resolution;
  sidecar["seed"] = opt.seed;
  sidecar["n_profiles"] = detection.graph.nodes.size();
  sidecar["n_omitted"] = detection.omitted.size();
  sidecar["n_dropped_outside_window"] = log.dropped_outside_window();
  sidecar["n_edges"] = detection.graph.edges.size();
  sidecar["n_communities"] = detection.partition.community_count();
  sidecar["modularity"] = detection.modularity;
  text::write_file(g.out + ".json", sidecar.dump(2) + "\n");
  info(g, "detected " + std::to_string(detection.partition.community_count()) +
              " communities over " + std::to_string(detection.graph.nodes.size()) +
              " profiles (" + std::to_string(detection.omitted.size()) + " omitted)");
}

// ---- baseline ---------------------------------------------------------------

struct BaselineArgs {
  std::string snapshots;
  std::string method = "louvain_edges";
  double resolution = 1.0;
  std::size_t max_iters = 100;
};

void cmd_baseline(const Globals& g, const BaselineArgs& a) {
  if (g.out.empty()) throw InputError("--out: baseline needs an output file");
  const auto snaps = read_snapshots(a.snapshots);
  const auto graph = aggregate_snapshots(snaps.node_count, snaps.steps);
  const std::uint64_t seed = g.seed.value_or(42);
  Partition p;
  if (a.method == "louvain_edges") {
    if (!(a.resolution > 0.0)) throw InputError("--resolution: must be positive");
    p = louvain(graph, {a.resolution, seed, false}).partition;
  } else if (a.method == "lpa_edges") {
    p = label_propagation(graph, seed, a.max_iters).partition;
  } else {
    throw InputError("--method: expected louvain_edges or lpa_edges");
  }
  std::vector<std::string> ids;
  for (std::size_t v = 0; v < snaps.node_count; ++v) ids.push_back(node_id(v));
  text::write_file(g.out, partition_to_csv(name_partition(ids, p)));
  info(g, a.method + ": " + std::to_string(p.community_count()) + " communities over " +
              std::to_string(snaps.node_count) + " nodes");
}

// ---- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string pred;
  std::string truth;
};

void cmd_evaluate(const Globals& g, const EvaluateArgs& a) {
  const auto aligned = align_partitions(read_partition(a.pred), read_partition(a.truth));
  if (aligned.nodes.empty()) {
    throw InsufficientDataError("predicted and true partitions share no nodes");
  }
  nlohmann::ordered_json j;
  j["nmi"] = nmi(aligned.predicted, aligned.truth);
  j["ari"] = ari(aligned.predicted, aligned.truth);
  j["n_pred_communities"] = aligned.predicted.community_count();
  j["n_true_communities"] = aligned.truth.community_count();
  j["n_evaluated"] = aligned.nodes.size();
  j["n_excluded_pred"] = aligned.excluded_predicted;
  j["n_excluded_truth"] = aligned.excluded_truth;
  emit(g, j.dump(2) + "\n");
}

// ---- sweep ------------------------------------------------------------------

struct SweepArgs {
  std::string spec;
  std::string plot;
  bool no_timestamp = false;
  std::string degfit_out;
  std::optional<unsigned> workers;
  std::optional<std::size_t> replicates;
};

void cmd_sweep(const Globals& g, const SweepArgs& a) {
  if (g.out.empty()) throw InputError("--out: sweep needs an output CSV path");
  SweepSpec spec;
  if (!a.spec.empty()) spec = sweep_spec_from_json(read_json_file(a.spec));
  if (g.seed) spec.base_seed = *g.seed;
  if (a.workers) spec.workers = *a.workers;
  if (a.replicates) spec.replicates = *a.replicates;
  if (!a.degfit_out.empty()) spec.degfit = true;
  spec.validate();

  const auto result = run_sweep(spec);
  text::write_file(g.out, sweep_rows_to_csv(result.rows));
  if (!a.degfit_out.empty()) text::write_file(a.degfit_out, degfit_rows_to_csv(result.degfit));
  if (!a.plot.empty()) {
    text::write_file(a.plot, sweep_svg(result.rows, spec.detectors,
                                       a.no_timestamp ? std::string{} : utc_timestamp()));
  }
  const fs::path manifest = g.out + ".failures.json";
  if (!result.failures.empty()) {
    text::write_file(manifest, failures_to_json(result.failures).dump(2) + "\n");
    throw InsufficientDataError(std::to_string(result.failures.size()) +
                                " sweep cell(s) failed; see " + manifest.string());
  }
  std::error_code ec;
  fs::remove(manifest, ec);
  info(g, "sweep wrote " + std::to_string(result.rows.size()) + " rows");
}

// ---- degfit -----------------------------------------------------------------

struct DegfitArgs {
  std::string input;
  bool total_degree = false;
};

std::vector<std::uint64_t> read_degree_input(const DegfitArgs& a) {
  const auto lines = text::read_lines(a.input);
  std::size_t first = 0;
  while (first < lines.size() && text::trim(lines[first]).empty()) ++first;
  if (first < lines.size() && text::trim(lines[first]) == "t,src,dst") {
    std::string all;
    for (const auto& l : lines) all += l + "\n";
    const auto snaps = parse_snapshots_csv(all);
    return snapshot_degrees(snaps.node_count, snaps.steps, a.total_degree);
  }
  std::vector<std::uint64_t> degrees;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    const auto v = text::parse_int(lines[i], "line " + std::to_string(i + 1));
    if (v < 0) throw InputError("line " + std::to_string(i + 1) + ": negative degree");
    degrees.push_back(static_cast<std::uint64_t>(v));
  }
  return degrees;
}

void cmd_degfit(const Globals& g, const DegfitArgs& a) {
  const auto degrees = read_degree_input(a);
  auto j = to_json(classify_network(degrees));
  j["degree"] = a.total_degree ? "total" : "in";
  emit(g, j.dump(2) + "\n");
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Coordination detection from temporal activity, and a bursty blockmodel simulator"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed")->group("Global");
  app.add_option("--out", g.out, "Output path")->group("Global");
  app.add_flag("--quiet", g.quiet, "Suppress progress messages")->group("Global");
  app.fallthrough();

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run the bursty blockmodel generator");
  simulate_cmd->add_option("--config", sim.config, "Generator config (JSON)")->check(CLI::ExistingFile);
  simulate_cmd->add_flag("--age-all", sim.age_all, "Age every node's recency, not only seen ones");
  simulate_cmd->add_option("--domains", sim.domains, "Number of data-plane domains");
  simulate_cmd->add_option("--lambda", sim.lambda, "Intra-community target probability");

  DetectArgs det;
  auto* detect_cmd = app.add_subcommand("detect", "Detect coordinating groups from an event log");
  detect_cmd->add_option("--events", det.events, "Event log (JSON lines or CSV)")->required();
  detect_cmd->add_option("--method", det.method, "Detection method")->capture_default_str();
  detect_cmd->add_option("--transform", det.transform, "one_minus_ks | exp_neg_ks[:scale]")
      ->capture_default_str();
  detect_cmd->add_option("--sparsify", det.sparsify, "none | top_k:K | threshold:T")
      ->capture_default_str();
  detect_cmd->add_option("--resolution", det.resolution, "Louvain resolution")->capture_default_str();
  detect_cmd->add_option("--min-events", det.min_events, "Minimum activities per profile")
      ->capture_default_str();
  detect_cmd->add_flag("--keep-zero-gaps", det.keep_zero_gaps,
                       "Keep zero gaps from duplicate timestamps");
  detect_cmd->add_flag("--cross-domain-only", det.cross_domain_only,
                       "Only compare profiles from different domains");
  detect_cmd->add_option("--window-start", det.window_start, "Window start");
  detect_cmd->add_option("--window-length", det.window_length, "Window length");
  detect_cmd->add_option("--workers", det.workers, "Threads for pairwise KS");
  detect_cmd->add_option("--graph-out", det.graph_out, "Also write the similarity graph CSV");

  BaselineArgs base;
  auto* baseline_cmd = app.add_subcommand("baseline", "Structural detection on the data plane");
  baseline_cmd->add_option("--snapshots", base.snapshots, "snapshots.csv")->required();
  baseline_cmd->add_option("--method", base.method, "louvain_edges | lpa_edges")->capture_default_str();
  baseline_cmd->add_option("--resolution", base.resolution, "Louvain resolution")->capture_default_str();
  baseline_cmd->add_option("--max-iters", base.max_iters, "Label propagation iteration cap")
      ->capture_default_str();

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a partition against ground truth");
  evaluate_cmd->add_option("--pred", ev.pred, "Predicted partition CSV")->required();
  evaluate_cmd->add_option("--truth", ev.truth, "Ground-truth partition CSV")->required();

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Lambda sweep over simulated systems");
  sweep_cmd->add_option("--spec", sw.spec, "Sweep spec (JSON)")->check(CLI::ExistingFile);
  sweep_cmd->add_option("--plot", sw.plot, "Write an SVG chart of mean NMI");
  sweep_cmd->add_flag("--no-timestamp", sw.no_timestamp, "Omit the timestamp comment from the SVG");
  sweep_cmd->add_option("--degfit-out", sw.degfit_out, "Also write the degree-fit summary CSV");
  sweep_cmd->add_option("--workers", sw.workers, "Worker threads");
  sweep_cmd->add_option("--replicates", sw.replicates, "Override replicates per lambda");

  DegfitArgs df;
  auto* degfit_cmd = app.add_subcommand("degfit", "Heavy-tail model selection on a degree sequence");
  degfit_cmd->add_option("--input", df.input, "snapshots.csv or one degree per line")->required();
  degfit_cmd->add_flag("--total-degree", df.total_degree, "Use total instead of in-degree");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (*simulate_cmd) cmd_simulate(g, sim);
    if (*detect_cmd) cmd_detect(g, det);
    if (*baseline_cmd) cmd_baseline(g, base);
    if (*evaluate_cmd) cmd_evaluate(g, ev);
    if (*sweep_cmd) cmd_sweep(g, sw);
    if (*degfit_cmd) cmd_degfit(g, df);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIoError;
  } catch (const InsufficientDataError& e) {
    std::cerr << "insufficient data: " << e.what() << "\n";
    return kInsufficientData;
  } catch (const FitError& e) {
    std::cerr << "fit error: " << e.what() << "\n";
    return kInsufficientData;
  }
  return kOk;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> copy = args;
  std::vector<char*> argv;
  for (auto& a : copy) argv.push_back(a.data());
  argv.push_back(nullptr);
  return run(static_cast<int>(copy.size()), argv.data());
}

}  // namespace burstcoord::cli
