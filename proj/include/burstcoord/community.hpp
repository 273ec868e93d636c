#pragma once

// Community detection on undirected weighted graphs and partition agreement
// metrics.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace burstcoord {

using Label = std::uint64_t;

// Label per node index. Labels need not be contiguous.
struct Partition {
  std::vector<Label> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t community_count() const;
  // Same grouping, labels renumbered 0.. in order of first appearance.
  Partition canonical() const;

  bool operator==(const Partition&) const = default;
};

// Undirected graph with non-negative weights. Parallel edges are merged by
// summing; self-loops are kept separately and count twice toward strength.
class WeightedGraph {
 public:
  using Neighbor = std::pair<std::size_t, double>;

  WeightedGraph() = default;
  explicit WeightedGraph(std::size_t n);

  struct EdgeInput {
    std::size_t u, v;
    double weight;
  };
  static WeightedGraph from_edges(std::size_t n, const std::vector<EdgeInput>& edges);

  // Appends without merging; use from_edges when the input has duplicates.
  void add_edge(std::size_t u, std::size_t v, double weight);

  std::size_t node_count() const { return adjacency_.size(); }
  const std::vector<Neighbor>& neighbors(std::size_t u) const { return adjacency_[u]; }
  double self_loop(std::size_t u) const { return self_loops_[u]; }
  // Weighted degree, self-loops counted twice.
  double strength(std::size_t u) const { return strength_[u]; }
  // 2m: sum of all strengths.
  double total_strength() const { return total_strength_; }

  WeightedGraph scaled(double factor) const;

 private:
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> self_loops_;
  std::vector<double> strength_;
  double total_strength_ = 0.0;
};

// Q = (1/2m) sum_ij [A_ij - resolution * k_i k_j / 2m] delta(c_i, c_j).
// Zero for a graph without weight.
double modularity(const WeightedGraph& g, const Partition& p, double resolution = 1.0);

struct LouvainOptions {
  double resolution = 1.0;
  std::uint64_t seed = 42;
  // Recompute the full modularity after every accepted move and throw a
  // ContractError if it ever decreases. Quadratic; meant for tests.
  bool audit = false;
};

struct LouvainResult {
  Partition partition;
  double modularity = 0.0;
  // Modularity at the end of each level's local-moving phase.
  std::vector<double> level_modularity;
  std::size_t levels = 0;
  std::size_t moves = 0;
};

LouvainResult louvain(const WeightedGraph& g, const LouvainOptions& options = {});

struct LabelPropagationResult {
  Partition partition;
  std::size_t iterations = 0;
  bool converged = false;
};

LabelPropagationResult label_propagation(const WeightedGraph& g, std::uint64_t seed,
                                         std::size_t max_iters = 100);

// 2 I(X;Y) / (H(X) + H(Y)) with natural logs. When both entropies vanish the
// partitions are both a single block and the score is 1.
double nmi(const Partition& x, const Partition& y);

// Adjusted Rand index under the permutation model.
double ari(const Partition& x, const Partition& y);

}  // namespace burstcoord
