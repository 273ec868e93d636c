#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "burstcoord/bcsbm.hpp"

namespace burstcoord {

// Generator configuration as JSON. Every field is optional and defaults to
// BcsbmParams{}; unknown fields are rejected by name.
BcsbmParams params_from_json(const nlohmann::json& j);
nlohmann::ordered_json params_to_json(const BcsbmParams& p);

// Generator parameters plus the multi-domain settings; this is both the
// simulate config file and the params.json written next to a run.
struct SimulateConfig {
  BcsbmParams params;
  MultiDomainOptions domains;
};

SimulateConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const SimulateConfig& c);

struct Snapshots {
  std::size_t node_count = 0;  // 1 + largest node id seen
  std::vector<std::vector<SnapshotEdge>> steps;
};

// `t,src,dst` rows. Throws InputError (with line number) on malformed rows or
// when the file holds no edges.
Snapshots parse_snapshots_csv(std::string_view text);
Snapshots read_snapshots(const std::filesystem::path& path);
std::string snapshots_to_csv(const std::vector<std::vector<SnapshotEdge>>& steps);

// Writes snapshots.csv, activity.jsonl, truth.csv and params.json. With more
// than one domain, snapshots are written per domain as snapshots.<domain>.csv
// and the activity log holds every domain's events.
void write_run_directory(const std::filesystem::path& dir, const SimulateConfig& config,
                         const std::vector<TemporalGraphRun>& runs);

}  // namespace burstcoord
