#include "burstcoord/run_io.hpp"

#include <set>
#include <sstream>

#include "burstcoord/errors.hpp"
#include "burstcoord/event_io.hpp"
#include "burstcoord/partition_io.hpp"
#include "burstcoord/text_io.hpp"

namespace burstcoord {

namespace {

template <typename T>
T field(const nlohmann::json& j, const char* name) {
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string(name) + ": invalid value");
  }
}

std::uint64_t non_negative(const nlohmann::json& j, const char* name) {
  const auto& v = j.at(name);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0)) {
    throw InputError(std::string(name) + ": expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

BcsbmParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("config: expected a JSON object");
  static const std::set<std::string> known{"n",       "T",          "community_sizes",
                                           "community_weights", "epsilon", "lambda",
                                           "z_init_max", "age_all", "seed"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw InputError(key + ": unknown config field");
  }
  BcsbmParams p;
  if (j.contains("n")) p.n = non_negative(j, "n");
  if (j.contains("T")) p.steps = non_negative(j, "T");
  if (j.contains("community_sizes")) {
    if (!j["community_sizes"].is_array()) throw InputError("community_sizes: expected an array");
    p.community_sizes.clear();
    for (const auto& s : j["community_sizes"]) {
      if (!s.is_number_integer() || s.get<long long>() < 0) {
        throw InputError("community_sizes: expected non-negative integers");
      }
      p.community_sizes.push_back(s.get<std::size_t>());
    }
  }
  if (j.contains("community_weights")) {
    if (!j["community_weights"].is_array()) {
      throw InputError("community_weights: expected an array");
    }
    p.community_weights.clear();
    for (const auto& w : j["community_weights"]) {
      if (!w.is_number()) throw InputError("community_weights: expected numbers");
      p.community_weights.push_back(w.get<double>());
    }
  }
  if (j.contains("epsilon")) p.epsilon = field<double>(j, "epsilon");
  if (j.contains("lambda")) p.lambda = field<double>(j, "lambda");
  if (j.contains("z_init_max")) p.z_init_max = non_negative(j, "z_init_max");
  if (j.contains("age_all")) p.age_all = field<bool>(j, "age_all");
  if (j.contains("seed")) p.seed = non_negative(j, "seed");
  p.validate();
  return p;
}

nlohmann::ordered_json params_to_json(const BcsbmParams& p) {
  nlohmann::ordered_json j;
  j["n"] = p.n;
  j["T"] = p.steps;
  j["community_sizes"] = p.community_sizes;
  j["community_weights"] = p.community_weights;
  j["epsilon"] = p.epsilon;
  j["lambda"] = p.lambda;
  j["z_init_max"] = p.z_init_max;
  j["age_all"] = p.age_all;
  j["seed"] = p.seed;
  return j;
}

SimulateConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("config: expected a JSON object");
  SimulateConfig c;
  nlohmann::json rest = j;
  if (rest.contains("n_domains")) {
    c.domains.n_domains = non_negative(rest, "n_domains");
    if (c.domains.n_domains == 0) throw InputError("n_domains: must be positive");
    rest.erase("n_domains");
  }
  if (rest.contains("shared_seed")) {
    c.domains.shared_seed = field<bool>(rest, "shared_seed");
    rest.erase("shared_seed");
  }
  c.params = params_from_json(rest);
  return c;
}

nlohmann::ordered_json config_to_json(const SimulateConfig& c) {
  auto j = params_to_json(c.params);
  j["n_domains"] = c.domains.n_domains;
  j["shared_seed"] = c.domains.shared_seed;
  return j;
}

Snapshots parse_snapshots_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  Snapshots out;
  std::size_t edges = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const auto tag = "line " + std::to_string(lineno);
    const auto f = text::csv_split(line);
    if (!header_seen) {
      if (f.size() != 3 || text::trim(f[0]) != "t" || text::trim(f[1]) != "src" ||
          text::trim(f[2]) != "dst") {
        throw InputError(tag + ": expected header 't,src,dst'");
      }
      header_seen = true;
      continue;
    }
    if (f.size() != 3) throw InputError(tag + ": expected 3 fields");
    const auto t = text::parse_int(f[0], tag);
    const auto src = text::parse_int(f[1], tag);
    const auto dst = text::parse_int(f[2], tag);
    if (t < 0 || src < 0 || dst < 0) throw InputError(tag + ": negative index");
    if (static_cast<std::size_t>(t) >= out.steps.size()) out.steps.resize(t + 1);
    out.steps[t].push_back({static_cast<std::size_t>(src), static_cast<std::size_t>(dst)});
    out.node_count = std::max({out.node_count, static_cast<std::size_t>(src) + 1,
                               static_cast<std::size_t>(dst) + 1});
    ++edges;
  }
  if (edges == 0) throw InputError("snapshot file holds no edges");
  return out;
}

Snapshots read_snapshots(const std::filesystem::path& path) {
  std::string text;
  for (const auto& l : text::read_lines(path)) text += l + "\n";
  return parse_snapshots_csv(text);
}

std::string snapshots_to_csv(const std::vector<std::vector<SnapshotEdge>>& steps) {
  std::string out = "t,src,dst\n";
  for (std::size_t t = 0; t < steps.size(); ++t) {
    for (const auto& e : steps[t]) {
      out += std::to_string(t) + "," + std::to_string(e.src) + "," + std::to_string(e.dst) + "\n";
    }
  }
  return out;
}

void write_run_directory(const std::filesystem::path& dir, const SimulateConfig& config,
                         const std::vector<TemporalGraphRun>& runs) {
  if (runs.empty()) throw ContractError("no runs to write");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::vector<Event> activity;
  for (const auto& run : runs) {
    activity.insert(activity.end(), run.activity_log.begin(), run.activity_log.end());
    const auto name =
        runs.size() == 1 ? std::string("snapshots.csv") : "snapshots." + run.domain + ".csv";
    text::write_file(dir / name, snapshots_to_csv(run.snapshots));
  }
  text::write_file(dir / "activity.jsonl", events_to_jsonl(activity));

  std::vector<std::string> ids;
  for (std::size_t v = 0; v < runs.front().community_of.size(); ++v) ids.push_back(node_id(v));
  text::write_file(dir / "truth.csv",
                   partition_to_csv(name_partition(ids, runs.front().ground_truth())));

  text::write_file(dir / "params.json", config_to_json(config).dump(2) + "\n");
}

}  // namespace burstcoord
