#include "burstcoord/partition_io.hpp"

#include <set>
#include <sstream>

#include "burstcoord/errors.hpp"
#include "burstcoord/text_io.hpp"

namespace burstcoord {

NamedPartition parse_partition_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  NamedPartition p;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const auto f = text::csv_split(line);
    const auto tag = "line " + std::to_string(lineno);
    if (!header_seen) {
      if (f.size() != 2 || text::trim(f[0]) != "node" || text::trim(f[1]) != "community") {
        throw InputError(tag + ": expected header 'node,community'");
      }
      header_seen = true;
      continue;
    }
    if (f.size() != 2) throw InputError(tag + ": expected 2 fields");
    const auto label = text::parse_int(f[1], tag);
    if (label < 0) throw InputError(tag + ": community labels must be non-negative");
    if (!p.emplace(f[0], static_cast<Label>(label)).second) {
      throw InputError(tag + ": node '" + f[0] + "' listed twice");
    }
  }
  if (!header_seen) throw InputError("partition file is empty");
  return p;
}

NamedPartition read_partition(const std::filesystem::path& path) {
  std::string text;
  for (const auto& l : text::read_lines(path)) text += l + "\n";
  return parse_partition_csv(text);
}

std::string partition_to_csv(const NamedPartition& p) {
  std::string out = "node,community\n";
  for (const auto& [node, label] : p) {
    out += text::csv_escape(node) + "," + std::to_string(label) + "\n";
  }
  return out;
}

NamedPartition name_partition(const std::vector<std::string>& node_ids, const Partition& p) {
  if (node_ids.size() != p.size()) throw ContractError("node id count does not match partition");
  NamedPartition out;
  for (std::size_t i = 0; i < node_ids.size(); ++i) {
    if (!out.emplace(node_ids[i], p.labels[i]).second) {
      throw ContractError("duplicate node id '" + node_ids[i] + "'");
    }
  }
  return out;
}

AlignedPartitions align_partitions(const NamedPartition& predicted, const NamedPartition& truth) {
  AlignedPartitions out;
  std::set<std::string> used_truth;
  for (const auto& [node, label] : predicted) {
    auto it = truth.find(node);
    if (it == truth.end()) {
      const auto at = node.rfind('@');
      if (at != std::string::npos) it = truth.find(node.substr(0, at));
    }
    if (it == truth.end()) {
      ++out.excluded_predicted;
      continue;
    }
    used_truth.insert(it->first);
    out.nodes.push_back(node);
    out.predicted.labels.push_back(label);
    out.truth.labels.push_back(it->second);
  }
  out.excluded_truth = truth.size() - used_truth.size();
  return out;
}

}  // namespace burstcoord
