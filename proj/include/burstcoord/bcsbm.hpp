#pragma once

// Bursty-corrected stochastic blockmodel.
//
// A hidden blockmodel A_w (the control plane) drives who becomes active: the
// next source is drawn with probability proportional to (A_w z)_v, where z
// counts inner steps since each node's last activity. The source then links
// to a target chosen by preferential attachment, either inside its own
// community (probability lambda) or among all nodes. The emitted edges form
// the observable data plane; the source activations form the activity log.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "burstcoord/community.hpp"
#include "burstcoord/events.hpp"

namespace burstcoord {

struct BcsbmParams {
  std::size_t n = 150;
  std::size_t steps = 100;  // outer timesteps T
  std::vector<std::size_t> community_sizes{50, 50, 50};
  std::vector<double> community_weights{1.0, 2.0, 4.0};
  double epsilon = 0.0;  // off-diagonal block weight
  double lambda = 0.8;
  std::uint64_t z_init_max = 1000;  // initial recency uniform in [0, z_init_max)
  bool age_all = false;             // age every node, not only previously seen ones
  std::uint64_t seed = 42;

  // Throws InputError naming the offending field.
  void validate() const;
  std::vector<std::size_t> community_of() const;
  bool operator==(const BcsbmParams&) const = default;
};

struct SnapshotEdge {
  std::size_t src = 0;
  std::size_t dst = 0;
  bool operator==(const SnapshotEdge&) const = default;
};

struct TemporalGraphRun {
  BcsbmParams params;
  std::string domain = "d0";
  std::vector<std::vector<SnapshotEdge>> snapshots;  // one edge list per outer step
  std::vector<Event> activity_log;                   // one event per emitted edge
  std::vector<std::size_t> community_of;
  std::vector<std::uint64_t> final_degree;
  std::vector<std::uint64_t> final_recency;
  // Steps where A_w z vanished and the source was drawn uniformly.
  std::size_t uniform_source_fallbacks = 0;
  // Steps where the source's community had no other member, so the target
  // was drawn from all nodes despite the intra-community coin.
  std::size_t singleton_target_fallbacks = 0;

  Partition ground_truth() const;
  std::size_t edge_count() const;
};

// Node ids used as event entities and partition node names.
std::string node_id(std::size_t v);

// Called after every inner step with that step's source and the recency
// vector.
using StepObserver = std::function<void(std::size_t source, std::span<const std::uint64_t> z)>;

TemporalGraphRun simulate(const BcsbmParams& params, const std::string& domain = "d0",
                          const StepObserver& observer = {});

struct MultiDomainOptions {
  std::size_t n_domains = 1;
  // Use params.seed verbatim for every domain instead of deriving one each.
  bool shared_seed = false;
};

// Seed used for domain `index` when seeds are derived from a base seed.
std::uint64_t domain_seed(std::uint64_t base, std::size_t index);

std::vector<TemporalGraphRun> simulate_multi_domain(const BcsbmParams& params,
                                                    const MultiDomainOptions& options);

double intra_edge_fraction(const TemporalGraphRun& run);

// Data-plane graph: all snapshots merged, weight = number of parallel edges.
WeightedGraph aggregate_snapshots(std::size_t n, const std::vector<std::vector<SnapshotEdge>>& snapshots);

// Per-node in-degree (times chosen as target) or total degree.
std::vector<std::uint64_t> snapshot_degrees(std::size_t n,
                                            const std::vector<std::vector<SnapshotEdge>>& snapshots,
                                            bool total);

}  // namespace burstcoord
