#include "burstcoord/bcsbm.hpp"

#include <cmath>
#include <numeric>

#include "burstcoord/errors.hpp"
#include "burstcoord/rng.hpp"

namespace burstcoord {

void BcsbmParams::validate() const {
  if (n == 0) throw InputError("n: must be positive");
  if (steps == 0) throw InputError("T: must be positive");
  if (community_sizes.empty()) throw InputError("community_sizes: must be non-empty");
  for (auto s : community_sizes) {
    if (s == 0) throw InputError("community_sizes: every community needs at least one node");
  }
  if (std::accumulate(community_sizes.begin(), community_sizes.end(), std::size_t{0}) != n) {
    throw InputError("community_sizes: sizes must sum to n");
  }
  if (community_weights.size() != community_sizes.size()) {
    throw InputError("community_weights: need one weight per community");
  }
  for (double w : community_weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InputError("community_weights: block weights must be positive");
    }
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InputError("epsilon: must be finite and non-negative");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("lambda: must lie in [0,1]");
  if (z_init_max == 0) throw InputError("z_init_max: must be positive");
}

std::vector<std::size_t> BcsbmParams::community_of() const {
  std::vector<std::size_t> out;
  out.reserve(n);
  for (std::size_t c = 0; c < community_sizes.size(); ++c) {
    out.insert(out.end(), community_sizes[c], c);
  }
  return out;
}

Partition TemporalGraphRun::ground_truth() const {
  return Partition{std::vector<Label>(community_of.begin(), community_of.end())};
}

std::size_t TemporalGraphRun::edge_count() const {
  std::size_t total = 0;
  for (const auto& s : snapshots) total += s.size();
  return total;
}

std::string node_id(std::size_t v) { return std::to_string(v); }

TemporalGraphRun simulate(const BcsbmParams& params, const std::string& domain,
                          const StepObserver& observer) {
  params.validate();
  const std::size_t n = params.n;
  const std::size_t blocks = params.community_sizes.size();

  TemporalGraphRun run;
  run.params = params;
  run.domain = domain;
  run.community_of = params.community_of();
  const auto& community = run.community_of;

  std::vector<std::vector<std::size_t>> members(blocks);
  for (std::size_t v = 0; v < n; ++v) members[community[v]].push_back(v);

  Rng rng(params.seed);
  std::vector<std::uint64_t> z(n), d(n, 0);
  for (auto& zv : z) zv = rng.below(params.z_init_max);
  std::vector<char> seen(n, 0), active_now(n, 0);

  std::vector<double> block_recency(blocks);
  std::vector<double> source_weight(n), target_weight(n);
  std::vector<std::size_t> candidates;
  candidates.reserve(n);

  run.snapshots.resize(params.steps);
  run.activity_log.reserve(n * params.steps);

  for (std::size_t t = 0; t < params.steps; ++t) {
    auto& edges = run.snapshots[t];
    edges.reserve(n);
    std::fill(active_now.begin(), active_now.end(), 0);

    for (std::size_t i = 0; i < n; ++i) {
      // Source: P(v) proportional to (A_w z)_v. Every member of a block shares
      // the same row of A_w, so the score depends only on v's block.
      std::fill(block_recency.begin(), block_recency.end(), 0.0);
      double all_recency = 0.0;
      for (std::size_t v = 0; v < n; ++v) {
        block_recency[community[v]] += static_cast<double>(z[v]);
        all_recency += static_cast<double>(z[v]);
      }
      double source_total = 0.0;
      for (std::size_t v = 0; v < n; ++v) {
        const std::size_t c = community[v];
        source_weight[v] = params.community_weights[c] * block_recency[c] +
                           params.epsilon * (all_recency - block_recency[c]);
        source_total += source_weight[v];
      }
      std::size_t source;
      if (source_total > 0.0) {
        source = rng.weighted(source_weight, source_total);
      } else {
        source = static_cast<std::size_t>(rng.below(n));
        ++run.uniform_source_fallbacks;
      }

      // Target: own block with probability lambda, otherwise any node; within
      // the chosen set, preferential attachment on degree + 1.
      const bool intra = rng.uniform() < params.lambda;
      candidates.clear();
      if (intra) {
        for (std::size_t v : members[community[source]]) {
          if (v != source) candidates.push_back(v);
        }
        if (candidates.empty()) ++run.singleton_target_fallbacks;
      }
      if (candidates.empty()) {
        for (std::size_t v = 0; v < n; ++v) {
          if (v != source) candidates.push_back(v);
        }
      }
      std::size_t target = source;
      if (!candidates.empty()) {
        double target_total = 0.0;
        for (std::size_t k = 0; k < candidates.size(); ++k) {
          target_weight[k] = static_cast<double>(d[candidates[k]] + 1);
          target_total += target_weight[k];
        }
        target = candidates[rng.weighted(std::span<const double>(target_weight.data(),
                                                                 candidates.size()),
                                         target_total)];
      }

      edges.push_back({source, target});
      run.activity_log.push_back(
          Event{node_id(source), domain, static_cast<double>(t * n + i)});
      ++d[source];
      ++d[target];
      active_now[source] = 1;
      active_now[target] = 1;

      for (std::size_t v = 0; v < n; ++v) {
        if (params.age_all || seen[v]) ++z[v];
      }
      z[source] = 0;
      if (observer) observer(source, z);
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (active_now[v]) seen[v] = 1;
    }
  }
  run.final_degree = std::move(d);
  run.final_recency = std::move(z);
  return run;
}

std::uint64_t domain_seed(std::uint64_t base, std::size_t index) {
  return derive_seed(base, {static_cast<std::uint64_t>(index)});
}

std::vector<TemporalGraphRun> simulate_multi_domain(const BcsbmParams& params,
                                                    const MultiDomainOptions& options) {
  if (options.n_domains == 0) throw InputError("n_domains: must be positive");
  std::vector<TemporalGraphRun> runs;
  runs.reserve(options.n_domains);
  for (std::size_t k = 0; k < options.n_domains; ++k) {
    BcsbmParams p = params;
    p.seed = options.shared_seed ? params.seed : domain_seed(params.seed, k);
    runs.push_back(simulate(p, "d" + std::to_string(k)));
  }
  return runs;
}

double intra_edge_fraction(const TemporalGraphRun& run) {
  std::size_t intra = 0, total = 0;
  for (const auto& snapshot : run.snapshots) {
    for (const auto& e : snapshot) {
      ++total;
      if (run.community_of[e.src] == run.community_of[e.dst]) ++intra;
    }
  }
  if (total == 0) throw ContractError("intra-edge fraction of an empty run");
  return static_cast<double>(intra) / static_cast<double>(total);
}

WeightedGraph aggregate_snapshots(std::size_t n,
                                  const std::vector<std::vector<SnapshotEdge>>& snapshots) {
  std::vector<WeightedGraph::EdgeInput> edges;
  for (const auto& s : snapshots) {
    for (const auto& e : s) {
      if (e.src >= n || e.dst >= n) throw InputError("snapshot edge endpoint out of range");
      edges.push_back({e.src, e.dst, 1.0});
    }
  }
  return WeightedGraph::from_edges(n, edges);
}

std::vector<std::uint64_t> snapshot_degrees(std::size_t n,
                                            const std::vector<std::vector<SnapshotEdge>>& snapshots,
                                            bool total) {
  std::vector<std::uint64_t> deg(n, 0);
  for (const auto& s : snapshots) {
    for (const auto& e : s) {
      ++deg.at(e.dst);
      if (total) ++deg.at(e.src);
    }
  }
  return deg;
}

}  // namespace burstcoord
