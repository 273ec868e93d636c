#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "burstcoord/events.hpp"

namespace burstcoord {

// Maps a KS dissimilarity in [0,1] to a similarity weight in [0,1],
// strictly decreasing in the statistic.
struct WeightTransform {
  enum class Kind { one_minus_ks, exp_neg_ks };
  Kind kind = Kind::one_minus_ks;
  double scale = 1.0;  // exp_neg_ks only; must be > 0

  double operator()(double ks) const;
  std::string name() const;

  static WeightTransform parse(const std::string& spec);  // "one_minus_ks" | "exp_neg_ks[:scale]"
};

struct Sparsify {
  enum class Kind { none, top_k, threshold };
  Kind kind = Kind::none;
  std::size_t k = 0;
  double theta = 0.0;

  std::string name() const;

  static Sparsify none() { return {}; }
  static Sparsify top(std::size_t k) { return {Kind::top_k, k, 0.0}; }
  static Sparsify at_least(double theta) { return {Kind::threshold, 0, theta}; }
  static Sparsify parse(const std::string& spec);  // "none" | "top_k:K" | "threshold:T"
};

struct WeightedEdge {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  double weight = 0.0;

  bool operator==(const WeightedEdge&) const = default;
};

// Similarity network over profiles. Node i is keys[i]; keys are in
// lexicographic (entity, domain) order, so index order is the tie-break order.
struct SimilarityGraph {
  std::vector<ProfileKey> nodes;
  std::vector<WeightedEdge> edges;  // sorted by (a, b)
  WeightTransform transform;
  Sparsify sparsify;
};

SimilarityGraph build_similarity_graph(const KsTable& scores, WeightTransform transform = {},
                                       Sparsify sparsify = {});

// `src,dst,weight`, each undirected pair once with src < dst as strings.
std::string similarity_graph_to_csv(const SimilarityGraph& g);

}  // namespace burstcoord
