#include "burstcoord/heavytail.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "burstcoord/errors.hpp"

namespace burstcoord {

std::string to_string(TailModel m) {
  switch (m) {
    case TailModel::power_law:
      return "power_law";
    case TailModel::truncated_power_law:
      return "truncated_power_law";
    case TailModel::log_normal:
      return "log_normal";
    case TailModel::exponential:
      return "exponential";
  }
  return "unknown";
}

std::vector<double> tail_of(std::span<const double> samples, double xmin) {
  std::vector<double> tail;
  for (double x : samples) {
    if (x >= xmin) tail.push_back(x);
  }
  std::sort(tail.begin(), tail.end());
  return tail;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log P(Z > z) for a standard normal, accurate far into the upper tail.
double log_normal_sf(double z) {
  if (z < 8.0) return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
  const double z2 = z * z;
  const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
  return -0.5 * z2 - std::log(z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

// log of the normaliser  int_xmin^inf x^-alpha e^(-beta x) dx.
// With x = xmin e^s the integral becomes
//   xmin^(1-alpha) e^(-beta xmin) int_0^inf e^((1-alpha) s - beta xmin (e^s - 1)) ds,
// whose integrand is bounded by 1 and decays at least like e^((1-alpha) s).
double tpl_log_norm(double alpha, double beta, double xmin) {
  const double b = beta * xmin;
  auto integrand = [&](double s) {
    const double e = (1.0 - alpha) * s - b * std::expm1(s);
    return e < -745.0 ? 0.0 : std::exp(e);
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  double error = 0.0;
  const double integral = integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity(),
                                               1e-13, &error);
  if (!(integral > 0.0) || !std::isfinite(integral)) return std::numeric_limits<double>::quiet_NaN();
  return (1.0 - alpha) * std::log(xmin) - b + std::log(integral);
}

double sum_log(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += std::log(x);
  return s;
}

double loglik_of(const TailFit& fit, const std::vector<double>& tail) {
  double ll = 0.0;
  for (double x : tail) ll += tail_log_pdf(fit, x);
  return ll;
}

// Bounded Nelder-Mead; points are clamped into the box after every update.
struct Box {
  std::array<double, 2> lower, upper;
  std::array<double, 2> clamp(std::array<double, 2> p) const {
    for (int i = 0; i < 2; ++i) p[i] = std::clamp(p[i], lower[i], upper[i]);
    return p;
  }
};

struct Minimum {
  std::array<double, 2> x;
  double value;
  bool converged;
};

Minimum nelder_mead(const std::function<double(const std::array<double, 2>&)>& f,
                    std::array<double, 2> start, std::array<double, 2> step, const Box& box,
                    int max_iter = 2000, double tol = 1e-12) {
  using Point = std::array<double, 2>;
  auto eval = [&](const Point& p) {
    const double v = f(p);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };
  std::array<Point, 3> simplex;
  simplex[0] = box.clamp(start);
  simplex[1] = box.clamp({start[0] + step[0], start[1]});
  simplex[2] = box.clamp({start[0], start[1] + step[1]});
  // A start on the upper bound collapses a vertex; step the other way.
  for (int i = 0; i < 2; ++i) {
    if (simplex[i + 1] == simplex[0]) {
      Point p = simplex[0];
      p[i] -= step[i];
      simplex[i + 1] = box.clamp(p);
    }
  }
  std::array<double, 3> values{};
  for (int i = 0; i < 3; ++i) values[i] = eval(simplex[i]);

  bool converged = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return values[a] < values[b]; });
    const int best = idx[0], mid = idx[1], worst = idx[2];
    const double spread = std::abs(values[worst] - values[best]);
    const double size = std::max(std::abs(simplex[worst][0] - simplex[best][0]),
                                 std::abs(simplex[worst][1] - simplex[best][1]));
    if (spread <= tol * (1.0 + std::abs(values[best])) && size < 1e-9) {
      converged = true;
      break;
    }
    Point centroid{(simplex[best][0] + simplex[mid][0]) / 2.0,
                   (simplex[best][1] + simplex[mid][1]) / 2.0};
    auto along = [&](double t) {
      return box.clamp({centroid[0] + t * (simplex[worst][0] - centroid[0]),
                        centroid[1] + t * (simplex[worst][1] - centroid[1])});
    };
    const Point reflected = along(-1.0);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      const Point expanded = along(-2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
    } else if (fr < values[mid]) {
      simplex[worst] = reflected;
      values[worst] = fr;
    } else {
      const Point contracted = fr < values[worst] ? along(-0.5) : along(0.5);
      const double fc = eval(contracted);
      if (fc < std::min(fr, values[worst])) {
        simplex[worst] = contracted;
        values[worst] = fc;
      } else {
        for (int i : {mid, worst}) {
          simplex[i] = box.clamp({(simplex[i][0] + simplex[best][0]) / 2.0,
                                  (simplex[i][1] + simplex[best][1]) / 2.0});
          values[i] = eval(simplex[i]);
        }
      }
    }
  }
  const int best = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
  return {simplex[best], values[best], converged};
}

constexpr double kTplBetaMin = 1e-15;
constexpr double kTplBetaMax = 10.0;
constexpr double kTplAlphaMax = 6.0;
constexpr double kTplAlphaMin = 1.0 + 1e-6;

TailFit fit_truncated_power_law(const std::vector<double>& tail, double xmin) {
  const double n = static_cast<double>(tail.size());
  const double log_sum = sum_log(tail);
  const double lin_sum = std::accumulate(tail.begin(), tail.end(), 0.0);
  const double mean = lin_sum / n;

  // Power-law MLE at the same cutoff: the beta -> 0 end of this family.
  const double log_ratio_sum = log_sum - n * std::log(xmin);
  const double alpha_pl = log_ratio_sum > 0.0 ? 1.0 + n / log_ratio_sum : kTplAlphaMax;
  const double alpha_max = std::max(kTplAlphaMax, alpha_pl + 1.0);

  auto loglik = [&](double alpha, double beta) {
    const double log_norm = tpl_log_norm(alpha, beta, xmin);
    if (!std::isfinite(log_norm)) return kNegInf;
    return -alpha * log_sum - beta * lin_sum - n * log_norm;
  };
  // Optimise over (alpha, log beta).
  auto objective = [&](const std::array<double, 2>& p) { return -loglik(p[0], std::exp(p[1])); };
  const Box box{{kTplAlphaMin, std::log(kTplBetaMin)}, {alpha_max, std::log(kTplBetaMax)}};

  const std::array<std::array<double, 2>, 5> starts{{
      {std::clamp(alpha_pl, kTplAlphaMin, alpha_max), std::log(1e-6 / mean)},
      {1.5, std::log(1.0 / mean)},
      {2.5, std::log(0.1 / mean)},
      {1.2, std::log(2.0 / mean)},
      {4.0, std::log(0.01 / mean)},
  }};
  // Exact nested candidate so the fit never falls below the power law.
  std::array<double, 2> best{std::clamp(alpha_pl, kTplAlphaMin, alpha_max), std::log(kTplBetaMin)};
  double best_value = objective(best);
  bool any_converged = false;
  for (const auto& s : starts) {
    auto m = nelder_mead(objective, box.clamp(s), {0.3, 1.0}, box);
    any_converged = any_converged || m.converged;
    if (m.value < best_value) {
      best = m.x;
      best_value = m.value;
    }
  }
  if (!std::isfinite(best_value) || best_value == std::numeric_limits<double>::max()) {
    throw FitError("truncated power law: no finite likelihood found after " +
                   std::to_string(starts.size()) + " restarts (n_tail=" +
                   std::to_string(tail.size()) + ", xmin=" + std::to_string(xmin) + ")");
  }
  TailFit fit;
  fit.model = TailModel::truncated_power_law;
  fit.params = {best[0], std::exp(best[1])};
  fit.xmin = xmin;
  fit.n_tail = tail.size();
  fit.log_norm = tpl_log_norm(best[0], fit.params[1], xmin);
  fit.loglik = -best_value;
  return fit;
}

TailFit fit_log_normal(const std::vector<double>& tail, double xmin) {
  const double n = static_cast<double>(tail.size());
  std::vector<double> logs(tail.size());
  std::transform(tail.begin(), tail.end(), logs.begin(), [](double x) { return std::log(x); });
  const double log_sum = std::accumulate(logs.begin(), logs.end(), 0.0);
  const double lmean = log_sum / n;
  double lvar = 0.0;
  for (double l : logs) lvar += (l - lmean) * (l - lmean);
  lvar /= n;
  const double lsd = std::max(std::sqrt(lvar), 1e-3);
  const double log_xmin = std::log(xmin);

  auto loglik = [&](double mu, double sigma) {
    double ll = -n * std::log(sigma) - log_sum - 0.5 * n * std::log(2.0 * std::numbers::pi);
    for (double l : logs) ll -= 0.5 * ((l - mu) / sigma) * ((l - mu) / sigma);
    ll -= n * log_normal_sf((log_xmin - mu) / sigma);
    return ll;
  };
  auto objective = [&](const std::array<double, 2>& p) { return -loglik(p[0], std::exp(p[1])); };
  const double log_max = logs.back();
  const Box box{{log_xmin - 50.0 * (1.0 + std::abs(log_xmin)), std::log(1e-3)},
                {log_max + 10.0, std::log(100.0)}};
  const std::array<std::array<double, 2>, 3> starts{{
      {lmean, std::log(lsd)},
      {log_xmin, std::log(2.0 * lsd)},
      {lmean - 2.0 * lsd, std::log(lsd)},
  }};
  std::array<double, 2> best = box.clamp(starts[0]);
  double best_value = objective(best);
  for (const auto& s : starts) {
    auto m = nelder_mead(objective, box.clamp(s), {0.5, 0.5}, box);
    if (m.value < best_value) {
      best = m.x;
      best_value = m.value;
    }
  }
  if (!std::isfinite(best_value) || best_value == std::numeric_limits<double>::max()) {
    throw FitError("log-normal: no finite likelihood found");
  }
  TailFit fit;
  fit.model = TailModel::log_normal;
  fit.params = {best[0], std::exp(best[1])};
  fit.xmin = xmin;
  fit.n_tail = tail.size();
  fit.loglik = -best_value;
  return fit;
}

TailFit fit_exponential(const std::vector<double>& tail, double xmin) {
  const double n = static_cast<double>(tail.size());
  const double excess = std::accumulate(tail.begin(), tail.end(), 0.0) / n - xmin;
  if (!(excess > 0.0)) throw FitError("exponential: tail has no spread above xmin");
  TailFit fit;
  fit.model = TailModel::exponential;
  fit.params = {1.0 / excess};
  fit.xmin = xmin;
  fit.n_tail = tail.size();
  fit.loglik = loglik_of(fit, tail);
  return fit;
}

// KS distance between the ascending tail sample and a power law at xmin.
double power_law_ks(const std::vector<double>& tail, double xmin, double alpha) {
  const double n = static_cast<double>(tail.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < tail.size()) {
    std::size_t j = i;
    while (j < tail.size() && tail[j] == tail[i]) ++j;
    const double model = 1.0 - std::pow(tail[i] / xmin, 1.0 - alpha);
    d = std::max({d, std::abs(static_cast<double>(i) / n - model),
                  std::abs(static_cast<double>(j) / n - model)});
    i = j;
  }
  return d;
}

}  // namespace

double tail_log_pdf(const TailFit& fit, double x) {
  if (x < fit.xmin) return kNegInf;
  switch (fit.model) {
    case TailModel::power_law: {
      const double alpha = fit.params.at(0);
      return std::log(alpha - 1.0) - std::log(fit.xmin) - alpha * std::log(x / fit.xmin);
    }
    case TailModel::truncated_power_law:
      return -fit.params.at(0) * std::log(x) - fit.params.at(1) * x - fit.log_norm;
    case TailModel::log_normal: {
      const double mu = fit.params.at(0), sigma = fit.params.at(1);
      const double z = (std::log(x) - mu) / sigma;
      return -0.5 * z * z - std::log(x * sigma) - 0.5 * std::log(2.0 * std::numbers::pi) -
             log_normal_sf((std::log(fit.xmin) - mu) / sigma);
    }
    case TailModel::exponential: {
      const double rate = fit.params.at(0);
      return std::log(rate) - rate * (x - fit.xmin);
    }
  }
  return kNegInf;
}

TailFit fit_power_law_at(std::span<const double> samples, double xmin) {
  if (!(xmin > 0.0)) throw FitError("power law: xmin must be positive");
  const auto tail = tail_of(samples, xmin);
  if (tail.size() < 2) throw FitError("power law: fewer than two samples above xmin");
  const double n = static_cast<double>(tail.size());
  const double log_ratio_sum = sum_log(tail) - n * std::log(xmin);
  if (!(log_ratio_sum > 0.0)) throw FitError("power law: tail has no spread above xmin");
  TailFit fit;
  fit.model = TailModel::power_law;
  fit.params = {1.0 + n / log_ratio_sum};
  fit.xmin = xmin;
  fit.n_tail = tail.size();
  fit.loglik = loglik_of(fit, tail);
  fit.ks_distance = power_law_ks(tail, xmin, fit.params[0]);
  return fit;
}

TailFit fit_power_law(std::span<const double> samples) {
  std::vector<double> positive;
  for (double x : samples) {
    if (x > 0.0 && std::isfinite(x)) positive.push_back(x);
  }
  if (positive.size() < kMinTailSamples) {
    throw FitError("power law: need at least " + std::to_string(kMinTailSamples) +
                   " positive samples, got " + std::to_string(positive.size()));
  }
  std::sort(positive.begin(), positive.end());
  if (positive.front() == positive.back()) throw FitError("power law: all samples are equal");

  std::optional<TailFit> best;
  for (std::size_t i = 0; i < positive.size(); ++i) {
    if (i > 0 && positive[i] == positive[i - 1]) continue;
    if (positive.size() - i < kMinTailSamples) break;
    if (positive[i] == positive.back()) break;
    auto fit = fit_power_law_at(positive, positive[i]);
    if (!best || fit.ks_distance < best->ks_distance) best = std::move(fit);
  }
  if (!best) throw FitError("power law: no admissible xmin candidate");
  return *best;
}

TailFit fit_alternative(std::span<const double> samples, TailModel model, double xmin) {
  if (!(xmin > 0.0)) throw FitError("xmin must be positive");
  const auto tail = tail_of(samples, xmin);
  if (tail.empty()) throw FitError("no samples at or above xmin");
  switch (model) {
    case TailModel::truncated_power_law:
      return fit_truncated_power_law(tail, xmin);
    case TailModel::log_normal:
      return fit_log_normal(tail, xmin);
    case TailModel::exponential:
      return fit_exponential(tail, xmin);
    case TailModel::power_law:
      return fit_power_law_at(samples, xmin);
  }
  throw FitError("unknown model");
}

LlrResult llr_test(const TailFit& a, const TailFit& b, std::span<const double> samples) {
  if (a.xmin != b.xmin) throw ContractError("LLR test needs fits on the same xmin");
  const auto tail = tail_of(samples, a.xmin);
  if (tail.empty()) throw ContractError("LLR test on an empty tail");
  std::vector<double> diff(tail.size());
  for (std::size_t i = 0; i < tail.size(); ++i) {
    diff[i] = tail_log_pdf(a, tail[i]) - tail_log_pdf(b, tail[i]);
  }
  const double n = static_cast<double>(diff.size());
  const double llr = std::accumulate(diff.begin(), diff.end(), 0.0);
  const double mean = llr / n;
  double var = 0.0;
  for (double d : diff) var += (d - mean) * (d - mean);
  var /= n;
  LlrResult r;
  r.llr = llr;
  if (var <= 0.0) {
    r.p_value = 1.0;
  } else {
    r.p_value = std::erfc(std::abs(llr) / std::sqrt(2.0 * n * var));
  }
  return r;
}

NetworkReport classify_network(std::span<const std::uint64_t> degrees) {
  NetworkReport report;
  report.n = degrees.size();
  std::vector<std::uint64_t> distinct(degrees.begin(), degrees.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  report.unique_degrees = distinct.size();
  report.eligible = report.unique_degrees >= kMinUniqueDegrees;
  if (!report.eligible) {
    report.detail = "fewer than " + std::to_string(kMinUniqueDegrees) + " unique degrees";
    return report;
  }

  std::vector<double> samples;
  for (auto d : degrees) {
    if (d > 0) samples.push_back(static_cast<double>(d));
  }
  try {
    report.power_law = fit_power_law(samples);
    const double xmin = report.power_law->xmin;
    bool all_better = true;
    for (auto model : {TailModel::truncated_power_law, TailModel::log_normal,
                       TailModel::exponential}) {
      report.alternatives.push_back(fit_alternative(samples, model, xmin));
    }
    const TailFit& tpl = report.alternatives[0];
    const std::array<const TailFit*, 3> others{&*report.power_law, &report.alternatives[1],
                                               &report.alternatives[2]};
    for (const TailFit* other : others) {
      const auto r = llr_test(tpl, *other, samples);
      report.comparisons.push_back({other->model, r});
      all_better = all_better && r.llr > 0.0 && r.p_value < kSignificance;
    }
    if (all_better) {
      report.winner = to_string(TailModel::truncated_power_law);
    } else {
      report.detail = "truncated power law not significantly better than every alternative";
    }
  } catch (const FitError& e) {
    report.detail = e.what();
  }
  return report;
}

nlohmann::ordered_json to_json(const TailFit& fit) {
  nlohmann::ordered_json j;
  j["model"] = to_string(fit.model);
  j["params"] = fit.params;
  j["xmin"] = fit.xmin;
  j["loglik"] = fit.loglik;
  j["n_tail"] = fit.n_tail;
  if (fit.model == TailModel::power_law) j["ks_distance"] = fit.ks_distance;
  return j;
}

nlohmann::ordered_json to_json(const NetworkReport& report) {
  nlohmann::ordered_json j;
  j["eligible"] = report.eligible;
  j["n"] = report.n;
  j["unique_degrees"] = report.unique_degrees;
  j["winner"] = report.winner;
  if (!report.detail.empty()) j["detail"] = report.detail;
  if (report.power_law) j["power_law"] = to_json(*report.power_law);
  auto alts = nlohmann::ordered_json::array();
  for (const auto& a : report.alternatives) alts.push_back(to_json(a));
  j["alternatives"] = alts;
  auto comps = nlohmann::ordered_json::array();
  for (const auto& c : report.comparisons) {
    nlohmann::ordered_json cj;
    cj["first"] = to_string(TailModel::truncated_power_law);
    cj["second"] = to_string(c.against);
    cj["llr"] = c.result.llr;
    cj["p_value"] = c.result.p_value;
    comps.push_back(cj);
  }
  j["comparisons"] = comps;
  return j;
}

}  // namespace burstcoord
