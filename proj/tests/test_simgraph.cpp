#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "burstcoord/errors.hpp"
#include "burstcoord/simgraph.hpp"

using namespace burstcoord;

namespace {

KsTable table_of(std::size_t n, const std::vector<double>& upper) {
  std::vector<ProfileKey> keys;
  for (std::size_t i = 0; i < n; ++i) keys.push_back({"n" + std::to_string(i), "d"});
  KsTable t(keys);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) t.set(i, j, upper[idx++]);
  }
  return t;
}

}  // namespace

TEST_CASE("weight transforms") {
  const WeightTransform lin;
  CHECK(lin(0.0) == 1.0);
  CHECK(lin(1.0) == 0.0);
  CHECK(lin(0.25) == 0.75);
  const auto ex = WeightTransform::parse("exp_neg_ks:2");
  CHECK(ex(0.5) == doctest::Approx(std::exp(-1.0)));
  CHECK(ex.name() == "exp_neg_ks:2");
  CHECK(WeightTransform::parse("exp_neg_ks").scale == 1.0);
  CHECK_THROWS_AS(WeightTransform::parse("exp_neg_ks:0"), InputError);
  CHECK_THROWS_AS(WeightTransform::parse("exp_neg_ks:-1"), InputError);
  CHECK_THROWS_AS(WeightTransform::parse("cosine"), InputError);

  for (const auto& t : {lin, ex}) {
    for (double d = 0.0; d < 1.0; d += 0.01) CHECK(t(d) > t(d + 0.01));
  }
}

TEST_CASE("sparsification parsing rejects bad parameters") {
  CHECK(Sparsify::parse("none").kind == Sparsify::Kind::none);
  CHECK(Sparsify::parse("top_k:3").k == 3);
  CHECK(Sparsify::parse("threshold:0.4").theta == 0.4);
  CHECK_THROWS_AS(Sparsify::parse("top_k:0"), InputError);
  CHECK_THROWS_AS(Sparsify::parse("top_k:-2"), InputError);
  CHECK_THROWS_AS(Sparsify::parse("top_k:x"), InputError);
  CHECK_THROWS_AS(Sparsify::parse("fraction:0.3"), InputError);

  const auto t = table_of(3, {0.1, 0.2, 0.3});
  CHECK_THROWS_AS(build_similarity_graph(t, {}, Sparsify::at_least(1.5)), InputError);
  CHECK_THROWS_AS(build_similarity_graph(t, {}, Sparsify::at_least(-0.1)), InputError);
  CHECK_THROWS_AS(build_similarity_graph(t, {}, Sparsify::top(0)), InputError);
}

TEST_CASE("dense graph keeps every scored pair") {
  const auto g = build_similarity_graph(table_of(4, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}));
  REQUIRE(g.edges.size() == 6);
  CHECK(g.edges[0] == WeightedEdge{0, 1, 0.9});
  CHECK(g.edges[5].weight == doctest::Approx(0.4));
  for (const auto& e : g.edges) {
    CHECK(e.a < e.b);
    CHECK(e.weight >= 0.0);
    CHECK(e.weight <= 1.0);
  }
}

TEST_CASE("threshold keeps edges at or above theta") {
  const auto g =
      build_similarity_graph(table_of(4, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}), {}, Sparsify::at_least(0.6));
  CHECK(g.edges.size() == 4);  // weights 0.9 0.8 0.7 0.6
}

TEST_CASE("top_k(1) on four nodes agrees with brute-force nomination over all orderings") {
  // Every assignment of six distinct dissimilarities to the six pairs.
  std::vector<double> values{0.05, 0.15, 0.25, 0.35, 0.45, 0.55};
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 1}, {0, 2}, {0, 3},
                                                               {1, 2}, {1, 3}, {2, 3}};
  std::set<std::size_t> kept_sizes;
  std::size_t orderings = 0;
  do {
    ++orderings;
    std::set<std::pair<std::size_t, std::size_t>> expected;
    for (std::size_t v = 0; v < 4; ++v) {
      std::size_t best = pairs.size();
      for (std::size_t e = 0; e < pairs.size(); ++e) {
        if (pairs[e].first != v && pairs[e].second != v) continue;
        if (best == pairs.size() || values[e] < values[best]) best = e;
      }
      expected.insert(pairs[best]);
    }
    const auto g = build_similarity_graph(table_of(4, values), {}, Sparsify::top(1));
    std::set<std::pair<std::size_t, std::size_t>> got;
    for (const auto& e : g.edges) got.insert({e.a, e.b});
    CHECK(got == expected);
    CHECK(g.edges.size() >= 2);
    CHECK(g.edges.size() <= 4);
    kept_sizes.insert(g.edges.size());
  } while (std::next_permutation(values.begin(), values.end()));
  CHECK(orderings == 720);
  // The globally strongest edge is nominated by both endpoints.
  CHECK(kept_sizes == std::set<std::size_t>{2, 3});
}

TEST_CASE("top_k ties resolve toward the smaller pair") {
  const auto g = build_similarity_graph(table_of(3, {0.5, 0.5, 0.5}), {}, Sparsify::top(1));
  // Node 0 and node 1 nominate (0,1); node 2 nominates (0,2).
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0].a == 0);
  CHECK(g.edges[0].b == 1);
  CHECK(g.edges[1].a == 0);
  CHECK(g.edges[1].b == 2);
}

TEST_CASE("unscored pairs never become edges") {
  std::vector<ProfileKey> keys{{"a", "x"}, {"b", "x"}, {"c", "y"}};
  KsTable t(keys);
  t.set(0, 2, 0.2);
  t.set(1, 2, 0.3);
  const auto g = build_similarity_graph(t);
  CHECK(g.edges.size() == 2);
  CHECK(similarity_graph_to_csv(g) == "src,dst,weight\na@x,c@y,0.8\nb@x,c@y,0.7\n");
}
