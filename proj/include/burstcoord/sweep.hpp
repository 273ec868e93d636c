#pragma once

// Lambda sweep: simulate, detect with every requested detector, evaluate
// against the generator's ground truth.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "burstcoord/bcsbm.hpp"
#include "burstcoord/simgraph.hpp"

namespace burstcoord {

enum class Detector {
  bursty,         // KS similarity network + Louvain on the activity log
  louvain_edges,  // Louvain on the aggregated data-plane graph
  lpa_edges,      // label propagation on the aggregated data-plane graph
  shuffled,       // bursty partition scored against randomly permuted truth
};

std::string to_string(Detector d);
Detector parse_detector(std::string_view name);

struct SweepSpec {
  std::vector<double> lambda_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::size_t replicates = 10;
  std::uint64_t base_seed = 42;
  std::vector<Detector> detectors{Detector::bursty, Detector::louvain_edges, Detector::lpa_edges};
  BcsbmParams generator;  // lambda and seed are overwritten per cell
  double resolution = 1.0;
  std::size_t min_events = 5;
  WeightTransform transform;
  std::size_t lpa_max_iters = 100;
  bool degfit = false;        // also classify each run's degree distribution
  bool total_degree = false;  // degfit on total rather than in-degree
  unsigned workers = 1;

  void validate() const;
};

SweepSpec sweep_spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json sweep_spec_to_json(const SweepSpec& s);

// hash(base_seed, lambda index, replicate)
std::uint64_t cell_seed(std::uint64_t base, std::size_t lambda_index, std::size_t replicate);

struct SweepRow {
  double lambda = 0.0;
  std::size_t replicate = 0;
  Detector detector = Detector::bursty;
  double nmi = 0.0;
  double ari = 0.0;
  double intra_edge_fraction = 0.0;

  bool operator==(const SweepRow&) const = default;
};

struct DegfitRow {
  double lambda = 0.0;
  std::uint64_t seed = 0;
  bool eligible = false;
  std::string winner;
  double llr_pl = 0.0, p_pl = 1.0;
  double llr_ln = 0.0, p_ln = 1.0;
  double llr_exp = 0.0, p_exp = 1.0;

  bool operator==(const DegfitRow&) const = default;
};

struct CellFailure {
  double lambda = 0.0;
  std::size_t replicate = 0;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;      // (lambda, replicate, detector order) ascending
  std::vector<DegfitRow> degfit;   // (lambda, replicate) ascending
  std::vector<CellFailure> failures;
};

SweepResult run_sweep(const SweepSpec& spec);

std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(std::string_view text);
std::string degfit_rows_to_csv(const std::vector<DegfitRow>& rows);
std::vector<DegfitRow> parse_degfit_csv(std::string_view text);
nlohmann::ordered_json failures_to_json(const std::vector<CellFailure>& failures);

struct SeriesPoint {
  double lambda = 0.0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for a single replicate
  std::size_t count = 0;
};

// Mean and spread of one metric per lambda for one detector.
std::vector<SeriesPoint> summarize(const std::vector<SweepRow>& rows, Detector detector,
                                   bool use_ari = false);

}  // namespace burstcoord
