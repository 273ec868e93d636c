#pragma once

// Heavy-tailed model selection for degree distributions.
//
// A continuous power law is fitted with the lower cutoff chosen to minimise
// the KS distance between the tail and the fit. The same tail is then fitted
// with a truncated power law, a log-normal and an exponential, and the models
// are compared through normalised log-likelihood ratios.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace burstcoord {

enum class TailModel { power_law, truncated_power_law, log_normal, exponential };

std::string to_string(TailModel m);

struct TailFit {
  TailModel model = TailModel::power_law;
  // power_law: {alpha}; truncated_power_law: {alpha, beta};
  // log_normal: {mu, sigma}; exponential: {rate}
  std::vector<double> params;
  double xmin = 0.0;
  double loglik = 0.0;
  std::size_t n_tail = 0;
  double ks_distance = 0.0;  // tail vs fitted CDF; filled for power_law
  // log of the normalising integral for truncated_power_law
  double log_norm = 0.0;
};

// Log density of a fitted model at x >= xmin.
double tail_log_pdf(const TailFit& fit, double x);

// Samples >= xmin, ascending.
std::vector<double> tail_of(std::span<const double> samples, double xmin);

// Smallest number of tail samples a candidate cutoff must keep.
inline constexpr std::size_t kMinTailSamples = 10;

TailFit fit_power_law(std::span<const double> samples);

// Continuous power-law MLE and its KS distance for a fixed cutoff.
TailFit fit_power_law_at(std::span<const double> samples, double xmin);

TailFit fit_alternative(std::span<const double> samples, TailModel model, double xmin);

struct LlrResult {
  double llr = 0.0;  // positive favours the first model
  double p_value = 1.0;
};

LlrResult llr_test(const TailFit& a, const TailFit& b, std::span<const double> samples);

struct Comparison {
  TailModel against;
  LlrResult result;
};

struct NetworkReport {
  bool eligible = false;
  std::size_t unique_degrees = 0;
  std::size_t n = 0;
  std::optional<TailFit> power_law;
  std::vector<TailFit> alternatives;  // truncated power law, log-normal, exponential
  std::vector<Comparison> comparisons;  // truncated power law vs each other model
  std::string winner = "inconclusive";
  std::string detail;
};

inline constexpr std::size_t kMinUniqueDegrees = 50;
inline constexpr double kSignificance = 0.1;

NetworkReport classify_network(std::span<const std::uint64_t> degrees);

nlohmann::ordered_json to_json(const TailFit& fit);
nlohmann::ordered_json to_json(const NetworkReport& report);

}  // namespace burstcoord
