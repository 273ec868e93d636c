#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "burstcoord/bcsbm.hpp"
#include "burstcoord/errors.hpp"

using namespace burstcoord;

namespace {

BcsbmParams small(std::uint64_t seed, double lambda) {
  BcsbmParams p;
  p.n = 60;
  p.steps = 15;
  p.community_sizes = {20, 20, 20};
  p.lambda = lambda;
  p.seed = seed;
  return p;
}

std::string invalid_field(const BcsbmParams& p) {
  try {
    p.validate();
  } catch (const InputError& e) {
    const std::string msg = e.what();
    return msg.substr(0, msg.find(':'));
  }
  return "";
}

}  // namespace

TEST_CASE("parameter validation names the offending field") {
  BcsbmParams p;
  CHECK(invalid_field(p).empty());
  p.community_sizes = {50, 50, 40};
  CHECK(invalid_field(p) == "community_sizes");
  p = {};
  p.community_weights = {1, 2};
  CHECK(invalid_field(p) == "community_weights");
  p = {};
  p.community_weights = {1, 0, 4};
  CHECK(invalid_field(p) == "community_weights");
  p = {};
  p.lambda = 1.5;
  CHECK(invalid_field(p) == "lambda");
  p = {};
  p.epsilon = -0.1;
  CHECK(invalid_field(p) == "epsilon");
  p = {};
  p.steps = 0;
  CHECK(invalid_field(p) == "T");
  p = {};
  p.z_init_max = 0;
  CHECK(invalid_field(p) == "z_init_max");
  CHECK_THROWS_AS(simulate(p), InputError);
}

TEST_CASE("one edge per inner step and degrees sum to twice the edge count") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    for (double lambda : {0.0, 0.5, 1.0}) {
      const auto run = simulate(small(seed, lambda));
      CHECK(run.snapshots.size() == 15);
      for (const auto& s : run.snapshots) CHECK(s.size() == 60);
      CHECK(run.edge_count() == 60 * 15);
      CHECK(run.activity_log.size() == 60 * 15);
      const auto total = std::accumulate(run.final_degree.begin(), run.final_degree.end(),
                                         std::uint64_t{0});
      CHECK(total == 2 * 60 * 15);
      for (const auto& s : run.snapshots) {
        for (const auto& e : s) CHECK(e.src != e.dst);
      }
    }
  }
}

TEST_CASE("activity log mirrors snapshot sources with strictly increasing times") {
  const auto run = simulate(small(4, 0.7), "web");
  std::size_t k = 0;
  for (std::size_t t = 0; t < run.snapshots.size(); ++t) {
    for (std::size_t i = 0; i < run.snapshots[t].size(); ++i, ++k) {
      const auto& ev = run.activity_log[k];
      CHECK(ev.entity == node_id(run.snapshots[t][i].src));
      CHECK(ev.domain == "web");
      CHECK(ev.t == static_cast<double>(t * 60 + i));
    }
  }
}

TEST_CASE("the source's recency resets to zero after each step") {
  std::size_t calls = 0;
  bool all_zero = true;
  std::vector<std::uint64_t> last;
  const auto run = simulate(small(9, 0.8), "d0", [&](std::size_t source, std::span<const std::uint64_t> z) {
    ++calls;
    all_zero = all_zero && z[source] == 0;
    last.assign(z.begin(), z.end());
  });
  CHECK(calls == 60 * 15);
  CHECK(all_zero);
  CHECK(last == run.final_recency);
}

TEST_CASE("recency only ages previously seen nodes unless age_all is set") {
  // Within the first outer step nothing has been seen yet, so a node that is
  // never a source keeps its initial recency.
  auto p = small(5, 0.8);
  p.steps = 1;
  std::vector<std::uint64_t> first, last;
  std::vector<std::size_t> sources;
  auto record = [&](std::size_t source, std::span<const std::uint64_t> z) {
    sources.push_back(source);
    last.assign(z.begin(), z.end());
    if (first.empty()) first = last;
  };
  simulate(p, "d0", record);
  std::size_t untouched = 0;
  for (std::size_t v = 0; v < p.n; ++v) {
    if (std::find(sources.begin(), sources.end(), v) != sources.end()) continue;
    ++untouched;
    CHECK(last[v] == first[v]);
  }
  CHECK(untouched > 0);

  p.age_all = true;
  first.clear();
  sources.clear();
  simulate(p, "d0", record);
  for (std::size_t v = 0; v < p.n; ++v) {
    if (std::find(sources.begin(), sources.end(), v) != sources.end()) continue;
    CHECK(last[v] == first[v] + p.n - 1);
  }
}

TEST_CASE("all-zero initial recency falls back to uniform sources until nodes age") {
  auto p = small(6, 0.8);
  p.z_init_max = 1;
  const auto run = simulate(p);
  // Every step of the first outer step, plus the first step of the second.
  CHECK(run.uniform_source_fallbacks == p.n + 1);
}

TEST_CASE("singleton communities fall back to global targets") {
  BcsbmParams p;
  p.n = 11;
  p.steps = 5;
  p.community_sizes = {10, 1};
  p.community_weights = {1, 1};
  p.epsilon = 0.5;
  p.lambda = 1.0;
  p.seed = 3;
  const auto run = simulate(p);
  std::size_t from_singleton = 0;
  for (const auto& s : run.snapshots) {
    for (const auto& e : s) from_singleton += e.src == 10;
  }
  CHECK(run.singleton_target_fallbacks == from_singleton);
  CHECK(from_singleton > 0);
}

TEST_CASE("bit-identical reruns at a fixed seed; different seeds differ") {
  const auto a = simulate(small(12, 0.6));
  const auto b = simulate(small(12, 0.6));
  CHECK(a.snapshots == b.snapshots);
  CHECK(a.activity_log == b.activity_log);
  CHECK(a.final_recency == b.final_recency);
  CHECK(simulate(small(13, 0.6)).snapshots != a.snapshots);
}

TEST_CASE("lambda = 1 with no off-diagonal weight keeps every edge inside its block") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CHECK(intra_edge_fraction(simulate(small(seed, 1.0))) == 1.0);
  }
  BcsbmParams one;
  one.n = 20;
  one.steps = 5;
  one.community_sizes = {20};
  one.community_weights = {1};
  one.lambda = 0.3;
  CHECK(intra_edge_fraction(simulate(one)) == 1.0);
}

TEST_CASE("lambda = 0 with three equal blocks gives about one third intra edges") {
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    BcsbmParams p;
    p.steps = 10;
    p.community_weights = {1, 1, 1};
    p.lambda = 0.0;
    p.seed = seed;
    sum += intra_edge_fraction(simulate(p));
  }
  CHECK(sum / 100.0 == doctest::Approx(1.0 / 3.0).epsilon(0.03));
}

TEST_CASE("mean intra-edge fraction increases with lambda") {
  double previous = -1.0;
  for (int step = 0; step <= 10; ++step) {
    const double lambda = step / 10.0;
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) sum += intra_edge_fraction(simulate(small(seed, lambda)));
    const double mean = sum / 20.0;
    CHECK(mean > previous);
    previous = mean;
  }
}

TEST_CASE("multi-domain runs share ground truth and derive seeds per domain") {
  auto p = small(21, 0.5);
  const auto runs = simulate_multi_domain(p, {3, false});
  REQUIRE(runs.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(runs[k].domain == "d" + std::to_string(k));
    CHECK(runs[k].ground_truth() == runs[0].ground_truth());
    BcsbmParams q = p;
    q.seed = domain_seed(p.seed, k);
    CHECK(runs[k].snapshots == simulate(q).snapshots);
  }
  CHECK(runs[0].snapshots != runs[1].snapshots);

  const auto shared = simulate_multi_domain(p, {2, true});
  CHECK(shared[0].snapshots == shared[1].snapshots);
  CHECK(shared[0].snapshots == simulate(p).snapshots);
  CHECK_THROWS_AS(simulate_multi_domain(p, {0, false}), InputError);
}

TEST_CASE("aggregated data plane and degree vectors") {
  const auto run = simulate(small(2, 0.9));
  const auto g = aggregate_snapshots(60, run.snapshots);
  CHECK(g.total_strength() == 2.0 * 60 * 15);
  const auto total = snapshot_degrees(60, run.snapshots, true);
  CHECK(total == run.final_degree);
  const auto in = snapshot_degrees(60, run.snapshots, false);
  CHECK(std::accumulate(in.begin(), in.end(), std::uint64_t{0}) == 60 * 15);
  CHECK_THROWS_AS(aggregate_snapshots(10, run.snapshots), InputError);
}
