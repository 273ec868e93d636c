#include "burstcoord/community.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "burstcoord/errors.hpp"
#include "burstcoord/rng.hpp"

namespace burstcoord {

std::size_t Partition::community_count() const {
  std::vector<Label> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

Partition Partition::canonical() const {
  std::unordered_map<Label, Label> remap;
  Partition out;
  out.labels.reserve(labels.size());
  for (Label l : labels) {
    auto [it, inserted] = remap.try_emplace(l, static_cast<Label>(remap.size()));
    out.labels.push_back(it->second);
  }
  return out;
}

WeightedGraph::WeightedGraph(std::size_t n)
    : adjacency_(n), self_loops_(n, 0.0), strength_(n, 0.0) {}

void WeightedGraph::add_edge(std::size_t u, std::size_t v, double weight) {
  if (u >= node_count() || v >= node_count()) throw ContractError("edge endpoint out of range");
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw ContractError("edge weights must be finite and non-negative");
  }
  if (u == v) {
    self_loops_[u] += weight;
    strength_[u] += 2.0 * weight;
  } else {
    adjacency_[u].emplace_back(v, weight);
    adjacency_[v].emplace_back(u, weight);
    strength_[u] += weight;
    strength_[v] += weight;
  }
  total_strength_ += 2.0 * weight;
}

WeightedGraph WeightedGraph::from_edges(std::size_t n, const std::vector<EdgeInput>& edges) {
  std::map<std::pair<std::size_t, std::size_t>, double> merged;
  for (const auto& e : edges) {
    auto key = std::minmax(e.u, e.v);
    merged[{key.first, key.second}] += e.weight;
  }
  WeightedGraph g(n);
  for (const auto& [key, w] : merged) g.add_edge(key.first, key.second, w);
  return g;
}

WeightedGraph WeightedGraph::scaled(double factor) const {
  WeightedGraph g(node_count());
  for (std::size_t u = 0; u < node_count(); ++u) {
    if (self_loops_[u] > 0.0) g.add_edge(u, u, self_loops_[u] * factor);
    for (const auto& [v, w] : adjacency_[u]) {
      if (u < v) g.add_edge(u, v, w * factor);
    }
  }
  return g;
}

double modularity(const WeightedGraph& g, const Partition& p, double resolution) {
  if (p.size() != g.node_count()) throw ContractError("partition does not cover the graph");
  const double two_m = g.total_strength();
  if (two_m <= 0.0) return 0.0;
  std::unordered_map<Label, double> internal, total;
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    const Label c = p.labels[u];
    total[c] += g.strength(u);
    internal[c] += 2.0 * g.self_loop(u);
    for (const auto& [v, w] : g.neighbors(u)) {
      if (p.labels[v] == c) internal[c] += w;
    }
  }
  double q = 0.0;
  for (const auto& [c, tot] : total) {
    q += internal[c] / two_m - resolution * (tot / two_m) * (tot / two_m);
  }
  return q;
}

namespace {

// Gains are compared after dividing by 2m so that the decision sequence does
// not depend on the overall weight scale.
constexpr double kGainEpsilon = 1e-13;

struct LocalMoveOutcome {
  std::vector<std::size_t> community;
  std::size_t moves = 0;
};

LocalMoveOutcome move_nodes(const WeightedGraph& g, double resolution, Rng& rng, bool audit,
                            double& audited_q) {
  const std::size_t n = g.node_count();
  const double two_m = g.total_strength();
  LocalMoveOutcome out;
  out.community.resize(n);
  std::iota(out.community.begin(), out.community.end(), 0);
  std::vector<double> tot(n);
  for (std::size_t u = 0; u < n; ++u) tot[u] = g.strength(u);

  std::vector<double> link_to(n, 0.0);
  std::vector<std::size_t> touched;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  auto current_partition = [&] {
    Partition p;
    p.labels.assign(out.community.begin(), out.community.end());
    return p;
  };
  if (audit) audited_q = modularity(g, current_partition(), resolution);

  bool improved = true;
  while (improved) {
    improved = false;
    rng.shuffle(order);
    for (std::size_t u : order) {
      const std::size_t home = out.community[u];
      const double k = g.strength(u);

      touched.clear();
      for (const auto& [v, w] : g.neighbors(u)) {
        const std::size_t c = out.community[v];
        if (link_to[c] == 0.0) touched.push_back(c);
        link_to[c] += w;
      }

      tot[home] -= k;
      auto gain = [&](std::size_t c) {
        return (link_to[c] - resolution * tot[c] * k / two_m) / two_m;
      };
      std::size_t best = home;
      double best_gain = gain(home);
      for (std::size_t c : touched) {
        const double gc = gain(c);
        if (gc > best_gain + kGainEpsilon) {
          best = c;
          best_gain = gc;
        }
      }
      tot[best] += k;
      out.community[u] = best;
      for (std::size_t c : touched) link_to[c] = 0.0;
      link_to[home] = 0.0;

      if (best != home) {
        improved = true;
        ++out.moves;
        if (audit) {
          const double q = modularity(g, current_partition(), resolution);
          if (q < audited_q - 1e-12) {
            throw ContractError("louvain audit: modularity decreased after a move");
          }
          audited_q = q;
        }
      }
    }
  }
  return out;
}

// Renumbers communities densely in order of first appearance.
std::size_t compact(std::vector<std::size_t>& community) {
  std::unordered_map<std::size_t, std::size_t> remap;
  for (auto& c : community) {
    auto [it, inserted] = remap.try_emplace(c, remap.size());
    c = it->second;
  }
  return remap.size();
}

WeightedGraph aggregate(const WeightedGraph& g, const std::vector<std::size_t>& community,
                        std::size_t count) {
  std::vector<WeightedGraph::EdgeInput> edges;
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    const std::size_t cu = community[u];
    if (g.self_loop(u) > 0.0) edges.push_back({cu, cu, g.self_loop(u)});
    for (const auto& [v, w] : g.neighbors(u)) {
      if (u < v) edges.push_back({cu, community[v], w});
    }
  }
  return WeightedGraph::from_edges(count, edges);
}

}  // namespace

LouvainResult louvain(const WeightedGraph& g, const LouvainOptions& options) {
  if (g.node_count() == 0) throw ContractError("louvain needs at least one node");
  if (!(options.resolution > 0.0)) throw ContractError("resolution must be positive");

  LouvainResult result;
  const std::size_t n = g.node_count();
  std::vector<std::size_t> membership(n);
  std::iota(membership.begin(), membership.end(), 0);

  if (g.total_strength() <= 0.0) {
    result.partition.labels.assign(membership.begin(), membership.end());
    return result;
  }

  Rng rng(options.seed);
  WeightedGraph level = g;
  double audited_q = 0.0;
  double previous_level_q = -std::numeric_limits<double>::infinity();
  while (true) {
    auto outcome = move_nodes(level, options.resolution, rng, options.audit, audited_q);
    const std::size_t count = compact(outcome.community);
    for (auto& m : membership) m = outcome.community[m];
    result.moves += outcome.moves;
    ++result.levels;

    Partition flat;
    flat.labels.assign(membership.begin(), membership.end());
    const double q = modularity(g, flat, options.resolution);
    if (options.audit && q < previous_level_q - 1e-12) {
      throw ContractError("louvain audit: modularity decreased across levels");
    }
    previous_level_q = q;
    result.level_modularity.push_back(q);

    if (outcome.moves == 0 || count == level.node_count()) break;
    level = aggregate(level, outcome.community, count);
  }

  result.partition.labels.assign(membership.begin(), membership.end());
  result.partition = result.partition.canonical();
  result.modularity = result.level_modularity.back();
  return result;
}

LabelPropagationResult label_propagation(const WeightedGraph& g, std::uint64_t seed,
                                         std::size_t max_iters) {
  if (g.node_count() == 0) throw ContractError("label propagation needs at least one node");
  const std::size_t n = g.node_count();
  LabelPropagationResult result;
  std::vector<Label> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);

  std::map<Label, double> score;
  std::vector<Label> tied;
  while (result.iterations < max_iters) {
    ++result.iterations;
    rng.shuffle(order);
    bool changed = false;
    for (std::size_t u : order) {
      score.clear();
      for (const auto& [v, w] : g.neighbors(u)) {
        if (w > 0.0) score[labels[v]] += w;
      }
      if (score.empty()) continue;
      double best = 0.0;
      for (const auto& [l, s] : score) best = std::max(best, s);
      tied.clear();
      for (const auto& [l, s] : score) {
        if (s >= best * (1.0 - 1e-12)) tied.push_back(l);
      }
      // A node already holding a maximal label keeps it; otherwise the tie is
      // broken uniformly at random.
      if (std::find(tied.begin(), tied.end(), labels[u]) != tied.end()) continue;
      labels[u] = tied[tied.size() == 1 ? 0 : static_cast<std::size_t>(rng.below(tied.size()))];
      changed = true;
    }
    if (!changed) {
      result.converged = true;
      break;
    }
  }
  result.partition.labels = std::move(labels);
  result.partition = result.partition.canonical();
  return result;
}

namespace {

struct Contingency {
  std::map<std::pair<Label, Label>, double> joint;
  std::map<Label, double> rows, cols;
  double n = 0.0;
};

Contingency contingency(const Partition& x, const Partition& y) {
  if (x.size() != y.size()) throw ContractError("partitions cover different node sets");
  if (x.size() == 0) throw ContractError("partitions are empty");
  Contingency c;
  c.n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    c.joint[{x.labels[i], y.labels[i]}] += 1.0;
    c.rows[x.labels[i]] += 1.0;
    c.cols[y.labels[i]] += 1.0;
  }
  return c;
}

double entropy(const std::map<Label, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [l, a] : counts) h -= (a / n) * std::log(a / n);
  return h;
}

double choose2(double a) { return a * (a - 1.0) / 2.0; }

}  // namespace

double nmi(const Partition& x, const Partition& y) {
  const auto c = contingency(x, y);
  const double hx = entropy(c.rows, c.n);
  const double hy = entropy(c.cols, c.n);
  if (hx + hy <= 0.0) return 1.0;
  // Same grouping under a relabelling: every block maps to exactly one block.
  if (c.joint.size() == c.rows.size() && c.joint.size() == c.cols.size()) return 1.0;
  double mi = 0.0;
  for (const auto& [key, nij] : c.joint) {
    mi += (nij / c.n) * std::log(c.n * nij / (c.rows.at(key.first) * c.cols.at(key.second)));
  }
  return std::clamp(2.0 * mi / (hx + hy), 0.0, 1.0);
}

double ari(const Partition& x, const Partition& y) {
  const auto c = contingency(x, y);
  double index = 0.0, a = 0.0, b = 0.0;
  for (const auto& [key, nij] : c.joint) index += choose2(nij);
  for (const auto& [l, ai] : c.rows) a += choose2(ai);
  for (const auto& [l, bj] : c.cols) b += choose2(bj);
  const double pairs = choose2(c.n);
  if (pairs == 0.0) return 1.0;
  // Scaled by the pair count so integer inputs stay exact until the division.
  const double num = pairs * index - a * b;
  const double den = pairs * 0.5 * (a + b) - a * b;
  if (den == 0.0) return num == 0.0 ? 1.0 : 0.0;
  return num / den;
}

}  // namespace burstcoord
