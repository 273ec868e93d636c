#pragma once

// Activity ingestion and burstiness signatures.
//
// A profile is one entity's presence in one domain. Its signature is the
// empirical distribution of gaps between consecutive activity timestamps, and
// two profiles are compared by the two-sample Kolmogorov-Smirnov statistic of
// those distributions.

#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace burstcoord {

struct ProfileKey {
  std::string entity;
  std::string domain;

  auto operator<=>(const ProfileKey&) const = default;
  bool operator==(const ProfileKey&) const = default;

  // "entity@domain"; used as the node id in exported graphs and partitions.
  std::string id() const;
};

struct Event {
  std::string entity;
  std::string domain;
  double t = 0.0;

  bool operator==(const Event&) const = default;
};

// Half-open [begin, end). Consecutive windows partition the time axis.
struct Window {
  double begin = 0.0;
  double end = std::numeric_limits<double>::infinity();

  bool contains(double t) const { return t >= begin && t < end; }
};

// Throws InputError naming the record index when t is not finite, negative, or
// the entity is empty.
void validate_event(const Event& e, std::size_t record);

class EventLog {
 public:
  EventLog() = default;

  // Validates every event and keeps those inside the window. The number of
  // events dropped for lying outside the window is available afterwards.
  EventLog(std::vector<Event> events, Window window);

  const std::vector<Event>& events() const { return events_; }
  const Window& window() const { return window_; }
  std::size_t dropped_outside_window() const { return dropped_; }
  bool empty() const { return events_.empty(); }

  // Activity timestamps per profile, each sorted ascending.
  std::map<ProfileKey, std::vector<double>> timestamps_by_profile() const;

 private:
  std::vector<Event> events_;
  Window window_;
  std::size_t dropped_ = 0;
};

struct IntereventProfile {
  ProfileKey key;
  std::vector<double> deltas;  // ascending

  std::size_t m() const { return deltas.size(); }
};

enum class TiePolicy {
  collapse,    // exact-duplicate timestamps count as one activity
  keep_zeros,  // duplicates yield zero-length gaps
};

struct ProfileOptions {
  std::size_t min_events = 5;
  TiePolicy ties = TiePolicy::collapse;
};

struct ProfileSet {
  std::map<ProfileKey, IntereventProfile> profiles;
  // Profiles below min_events, with their activity count after tie handling.
  std::vector<std::pair<ProfileKey, std::size_t>> omitted;
};

ProfileSet build_profiles(const EventLog& log, const ProfileOptions& options = {});

// Gaps between consecutive sorted timestamps, after tie handling, ascending.
std::vector<double> interevent_deltas(std::vector<double> timestamps, TiePolicy ties);

// Fraction of deltas <= x. Requires m >= 1.
double ecdf_eval(const IntereventProfile& profile, double x);

// sup_x |F_a(x) - F_b(x)| for two ascending samples, evaluated exactly at the
// merged breakpoints. Throws ContractError when either sample is empty.
double ks_statistic(std::span<const double> a_sorted, std::span<const double> b_sorted);
double ks_statistic(const IntereventProfile& p, const IntereventProfile& q);

// One-sided sup_x (F_a(x) - F_b(x)); positive when a is stochastically smaller.
double ks_statistic_one_sided(std::span<const double> a_sorted, std::span<const double> b_sorted);

// Asymptotic two-sample p-value for statistic d with sample sizes n1, n2
// (Kolmogorov limit with Stephens' small-sample correction).
double ks_pvalue(double d, std::size_t n1, std::size_t n2);

// Upper triangle of pairwise KS statistics over profiles in key order.
class KsTable {
 public:
  KsTable() = default;
  explicit KsTable(std::vector<ProfileKey> keys);

  const std::vector<ProfileKey>& keys() const { return keys_; }
  std::size_t size() const { return keys_.size(); }

  // Whether the pair (i, j), i != j, was scored.
  bool has(std::size_t i, std::size_t j) const;
  // Throws ContractError if the pair was not scored.
  double at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double value);
  std::size_t scored_pairs() const;

 private:
  std::size_t slot(std::size_t i, std::size_t j) const;

  std::vector<ProfileKey> keys_;
  std::vector<double> values_;  // NaN marks an unscored pair
};

struct PairwiseOptions {
  bool cross_domain_only = false;
  unsigned workers = 1;
};

KsTable pairwise_ks(const std::map<ProfileKey, IntereventProfile>& profiles,
                    const PairwiseOptions& options = {});

}  // namespace burstcoord
