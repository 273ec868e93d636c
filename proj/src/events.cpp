#include "burstcoord/events.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "burstcoord/errors.hpp"

namespace burstcoord {

std::string ProfileKey::id() const { return entity + "@" + domain; }

void validate_event(const Event& e, std::size_t record) {
  if (!std::isfinite(e.t)) {
    throw InputError("record " + std::to_string(record) + ": non-finite timestamp");
  }
  if (e.t < 0.0) {
    throw InputError("record " + std::to_string(record) + ": negative timestamp");
  }
  if (e.entity.empty()) {
    throw InputError("record " + std::to_string(record) + ": empty entity");
  }
}

EventLog::EventLog(std::vector<Event> events, Window window) : window_(window) {
  if (!(window.begin < window.end)) throw InputError("empty event window");
  events_.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    validate_event(events[i], i);
    if (window.contains(events[i].t)) {
      events_.push_back(std::move(events[i]));
    } else {
      ++dropped_;
    }
  }
}

std::map<ProfileKey, std::vector<double>> EventLog::timestamps_by_profile() const {
  std::map<ProfileKey, std::vector<double>> out;
  for (const auto& e : events_) out[ProfileKey{e.entity, e.domain}].push_back(e.t);
  for (auto& [key, ts] : out) std::sort(ts.begin(), ts.end());
  return out;
}

std::vector<double> interevent_deltas(std::vector<double> timestamps, TiePolicy ties) {
  std::sort(timestamps.begin(), timestamps.end());
  if (ties == TiePolicy::collapse) {
    timestamps.erase(std::unique(timestamps.begin(), timestamps.end()), timestamps.end());
  }
  std::vector<double> deltas;
  if (timestamps.size() < 2) return deltas;
  deltas.reserve(timestamps.size() - 1);
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    deltas.push_back(timestamps[i] - timestamps[i - 1]);
  }
  std::sort(deltas.begin(), deltas.end());
  return deltas;
}

ProfileSet build_profiles(const EventLog& log, const ProfileOptions& options) {
  if (options.min_events < 2) throw InputError("min_events must be at least 2");
  ProfileSet out;
  for (auto& [key, ts] : log.timestamps_by_profile()) {
    auto deltas = interevent_deltas(ts, options.ties);
    const std::size_t activities = deltas.size() + (ts.empty() ? 0 : 1);
    if (activities < options.min_events) {
      out.omitted.emplace_back(key, activities);
      continue;
    }
    out.profiles.emplace(key, IntereventProfile{key, std::move(deltas)});
  }
  return out;
}

double ecdf_eval(const IntereventProfile& profile, double x) {
  if (profile.deltas.empty()) throw ContractError("ecdf of an empty profile");
  const auto it = std::upper_bound(profile.deltas.begin(), profile.deltas.end(), x);
  return static_cast<double>(it - profile.deltas.begin()) /
         static_cast<double>(profile.deltas.size());
}

namespace {

// Walks both ascending samples through their merged breakpoints, evaluating
// the two right-continuous ECDFs after consuming every copy of each value.
template <typename Gap>
double sweep_breakpoints(std::span<const double> a, std::span<const double> b, Gap gap) {
  if (a.empty() || b.empty()) throw ContractError("KS statistic needs non-empty samples");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    best = std::max(best, gap(static_cast<double>(i) / na, static_cast<double>(j) / nb));
  }
  // Once either sample is exhausted the remaining gaps only shrink.
  return best;
}

}  // namespace

double ks_statistic(std::span<const double> a_sorted, std::span<const double> b_sorted) {
  return sweep_breakpoints(a_sorted, b_sorted,
                           [](double fa, double fb) { return std::abs(fa - fb); });
}

double ks_statistic(const IntereventProfile& p, const IntereventProfile& q) {
  return ks_statistic(std::span<const double>(p.deltas), std::span<const double>(q.deltas));
}

double ks_statistic_one_sided(std::span<const double> a_sorted,
                              std::span<const double> b_sorted) {
  return sweep_breakpoints(a_sorted, b_sorted, [](double fa, double fb) { return fa - fb; });
}

double ks_pvalue(double d, std::size_t n1, std::size_t n2) {
  if (n1 == 0 || n2 == 0) throw ContractError("KS p-value needs non-empty samples");
  const double en = std::sqrt(static_cast<double>(n1) * static_cast<double>(n2) /
                              static_cast<double>(n1 + n2));
  const double lambda = (en + 0.12 + 0.11 / en) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsTable::KsTable(std::vector<ProfileKey> keys)
    : keys_(std::move(keys)),
      values_(keys_.size() < 2 ? 0 : keys_.size() * (keys_.size() - 1) / 2,
              std::numeric_limits<double>::quiet_NaN()) {}

std::size_t KsTable::slot(std::size_t i, std::size_t j) const {
  if (i == j || i >= keys_.size() || j >= keys_.size()) {
    throw ContractError("KS table index out of range or on the diagonal");
  }
  if (i > j) std::swap(i, j);
  // Row-major upper triangle without the diagonal.
  const std::size_t n = keys_.size();
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

bool KsTable::has(std::size_t i, std::size_t j) const {
  if (i == j) return false;
  return !std::isnan(values_[slot(i, j)]);
}

double KsTable::at(std::size_t i, std::size_t j) const {
  const double v = values_[slot(i, j)];
  if (std::isnan(v)) throw ContractError("KS pair was not scored");
  return v;
}

void KsTable::set(std::size_t i, std::size_t j, double value) { values_[slot(i, j)] = value; }

std::size_t KsTable::scored_pairs() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double v) { return !std::isnan(v); }));
}

KsTable pairwise_ks(const std::map<ProfileKey, IntereventProfile>& profiles,
                    const PairwiseOptions& options) {
  std::vector<ProfileKey> keys;
  std::vector<const IntereventProfile*> refs;
  for (const auto& [key, profile] : profiles) {
    keys.push_back(key);
    refs.push_back(&profile);
  }
  if (keys.size() < 2) throw ContractError("pairwise KS needs at least two profiles");
  KsTable table(keys);
  const std::size_t n = keys.size();

  // Each row writes to its own disjoint slots, so the result does not depend
  // on how rows are distributed across workers.
  auto score_rows = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < n; i += stride) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (options.cross_domain_only && keys[i].domain == keys[j].domain) continue;
        table.set(i, j, ks_statistic(*refs[i], *refs[j]));
      }
    }
  };

  const unsigned workers = std::max(1u, options.workers);
  if (workers == 1 || n < 64) {
    score_rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(score_rows, w, workers);
  }
  return table;
}

}  // namespace burstcoord
