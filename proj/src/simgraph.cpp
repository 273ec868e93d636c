#include "burstcoord/simgraph.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "burstcoord/errors.hpp"
#include "burstcoord/text_io.hpp"

namespace burstcoord {

double WeightTransform::operator()(double ks) const {
  switch (kind) {
    case Kind::one_minus_ks:
      return 1.0 - ks;
    case Kind::exp_neg_ks:
      return std::exp(-scale * ks);
  }
  return 0.0;
}

std::string WeightTransform::name() const {
  if (kind == Kind::one_minus_ks) return "one_minus_ks";
  return "exp_neg_ks:" + text::format_double(scale);
}

WeightTransform WeightTransform::parse(const std::string& spec) {
  if (spec == "one_minus_ks") return {};
  if (spec.rfind("exp_neg_ks", 0) == 0) {
    WeightTransform t{Kind::exp_neg_ks, 1.0};
    if (spec.size() > 10) {
      if (spec[10] != ':') throw InputError("unknown transform '" + spec + "'");
      t.scale = text::parse_double(spec.substr(11), "transform scale");
    }
    if (!(t.scale > 0.0) || !std::isfinite(t.scale)) {
      throw InputError("exp_neg_ks scale must be positive");
    }
    return t;
  }
  throw InputError("unknown transform '" + spec + "'");
}

std::string Sparsify::name() const {
  switch (kind) {
    case Kind::none:
      return "none";
    case Kind::top_k:
      return "top_k:" + std::to_string(k);
    case Kind::threshold:
      return "threshold:" + text::format_double(theta);
  }
  return {};
}

Sparsify Sparsify::parse(const std::string& spec) {
  if (spec == "none") return none();
  if (spec.rfind("top_k:", 0) == 0) {
    const auto k = text::parse_int(spec.substr(6), "top_k");
    if (k <= 0) throw InputError("top_k requires k > 0");
    return top(static_cast<std::size_t>(k));
  }
  if (spec.rfind("threshold:", 0) == 0) {
    return at_least(text::parse_double(spec.substr(10), "threshold"));
  }
  throw InputError("unknown sparsification '" + spec + "'");
}

namespace {

void validate(const WeightTransform& transform, const Sparsify& sparsify) {
  if (transform.kind == WeightTransform::Kind::exp_neg_ks &&
      !(transform.scale > 0.0 && std::isfinite(transform.scale))) {
    throw InputError("exp_neg_ks scale must be positive");
  }
  if (sparsify.kind == Sparsify::Kind::top_k && sparsify.k == 0) {
    throw InputError("top_k requires k > 0");
  }
  if (sparsify.kind == Sparsify::Kind::threshold &&
      !(sparsify.theta >= 0.0 && sparsify.theta <= 1.0)) {
    throw InputError("threshold must lie in [0,1]");
  }
}

}  // namespace

SimilarityGraph build_similarity_graph(const KsTable& scores, WeightTransform transform,
                                       Sparsify sparsify) {
  validate(transform, sparsify);
  SimilarityGraph g;
  g.nodes = scores.keys();
  g.transform = transform;
  g.sparsify = sparsify;
  const std::size_t n = g.nodes.size();

  std::vector<WeightedEdge> all;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!scores.has(i, j)) continue;
      const double w = std::clamp(transform(scores.at(i, j)), 0.0, 1.0);
      all.push_back({i, j, w});
    }
  }

  switch (sparsify.kind) {
    case Sparsify::Kind::none:
      g.edges = std::move(all);
      break;
    case Sparsify::Kind::threshold:
      for (const auto& e : all) {
        if (e.weight >= sparsify.theta) g.edges.push_back(e);
      }
      break;
    case Sparsify::Kind::top_k: {
      // Each node nominates its k strongest incident edges; an edge survives
      // if either endpoint nominated it. Ties go to the smaller (a, b) pair.
      std::vector<std::vector<std::size_t>> incident(n);
      for (std::size_t e = 0; e < all.size(); ++e) {
        incident[all[e].a].push_back(e);
        incident[all[e].b].push_back(e);
      }
      std::vector<char> keep(all.size(), 0);
      for (auto& list : incident) {
        std::sort(list.begin(), list.end(), [&](std::size_t x, std::size_t y) {
          if (all[x].weight != all[y].weight) return all[x].weight > all[y].weight;
          return std::tie(all[x].a, all[x].b) < std::tie(all[y].a, all[y].b);
        });
        const std::size_t take = std::min(sparsify.k, list.size());
        for (std::size_t r = 0; r < take; ++r) keep[list[r]] = 1;
      }
      for (std::size_t e = 0; e < all.size(); ++e) {
        if (keep[e]) g.edges.push_back(all[e]);
      }
      break;
    }
  }
  return g;
}

std::string similarity_graph_to_csv(const SimilarityGraph& g) {
  struct Row {
    std::string src, dst;
    double w;
  };
  std::vector<Row> rows;
  rows.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    auto a = g.nodes[e.a].id();
    auto b = g.nodes[e.b].id();
    if (b < a) std::swap(a, b);
    rows.push_back({std::move(a), std::move(b), e.weight});
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& x, const Row& y) { return std::tie(x.src, x.dst) < std::tie(y.src, y.dst); });
  std::string out = "src,dst,weight\n";
  for (const auto& r : rows) {
    out += text::csv_escape(r.src) + "," + text::csv_escape(r.dst) + "," +
           text::format_double(r.w) + "\n";
  }
  return out;
}

}  // namespace burstcoord
