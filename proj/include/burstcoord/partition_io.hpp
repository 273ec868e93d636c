#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "burstcoord/community.hpp"

namespace burstcoord {

// Partition keyed by node id strings, as stored in `node,community` files.
using NamedPartition = std::map<std::string, Label>;

NamedPartition parse_partition_csv(std::string_view text);
NamedPartition read_partition(const std::filesystem::path& path);
std::string partition_to_csv(const NamedPartition& p);

NamedPartition name_partition(const std::vector<std::string>& node_ids, const Partition& p);

// Predicted and true labels over the nodes both partitions cover. A predicted
// node id of the form "entity@domain" that is missing from the truth is
// matched to the truth entry for "entity", so per-domain profiles can be
// scored against entity-level ground truth.
struct AlignedPartitions {
  std::vector<std::string> nodes;
  Partition predicted;
  Partition truth;
  std::size_t excluded_predicted = 0;  // predicted nodes without a truth label
  std::size_t excluded_truth = 0;      // truth nodes never predicted
};

AlignedPartitions align_partitions(const NamedPartition& predicted, const NamedPartition& truth);

}  // namespace burstcoord
