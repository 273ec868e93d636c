#include "burstcoord/pipeline.hpp"

#include <set>

#include "burstcoord/errors.hpp"

namespace burstcoord {

std::vector<std::string> Detection::node_ids() const {
  std::set<std::string> domains;
  for (const auto& k : graph.nodes) domains.insert(k.domain);
  std::vector<std::string> ids;
  ids.reserve(graph.nodes.size());
  for (const auto& k : graph.nodes) ids.push_back(domains.size() <= 1 ? k.entity : k.id());
  return ids;
}

NamedPartition Detection::named() const { return name_partition(node_ids(), partition); }

WeightedGraph to_weighted_graph(const SimilarityGraph& g) {
  WeightedGraph out(g.nodes.size());
  for (const auto& e : g.edges) out.add_edge(e.a, e.b, e.weight);
  return out;
}

Detection detect_bursty(const EventLog& log, const DetectOptions& options) {
  auto profiles = build_profiles(log, options.profile);
  if (profiles.profiles.size() < 2) {
    throw InsufficientDataError("insufficient profiles: " +
                                std::to_string(profiles.profiles.size()) +
                                " with at least " + std::to_string(options.profile.min_events) +
                                " events");
  }
  const auto table =
      pairwise_ks(profiles.profiles, {options.cross_domain_only, options.workers});
  Detection out;
  out.graph = build_similarity_graph(table, options.transform, options.sparsify);
  out.omitted = std::move(profiles.omitted);
  const auto result =
      louvain(to_weighted_graph(out.graph), {options.resolution, options.seed, false});
  out.partition = result.partition;
  out.modularity = result.modularity;
  return out;
}

}  // namespace burstcoord
