#pragma once

// Burstiness-based coordination detection: profiles -> pairwise KS ->
// similarity network -> Louvain.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "burstcoord/community.hpp"
#include "burstcoord/events.hpp"
#include "burstcoord/partition_io.hpp"
#include "burstcoord/simgraph.hpp"

namespace burstcoord {

struct DetectOptions {
  ProfileOptions profile;
  bool cross_domain_only = false;
  WeightTransform transform;
  Sparsify sparsify;
  double resolution = 1.0;
  std::uint64_t seed = 42;
  unsigned workers = 1;
};

struct Detection {
  SimilarityGraph graph;
  Partition partition;
  std::vector<std::pair<ProfileKey, std::size_t>> omitted;
  double modularity = 0.0;

  // Node ids for output: the bare entity when every profile shares one
  // domain, "entity@domain" otherwise.
  std::vector<std::string> node_ids() const;
  NamedPartition named() const;
};

// Throws InsufficientDataError when fewer than two profiles pass filtering.
Detection detect_bursty(const EventLog& log, const DetectOptions& options = {});

WeightedGraph to_weighted_graph(const SimilarityGraph& g);

}  // namespace burstcoord
