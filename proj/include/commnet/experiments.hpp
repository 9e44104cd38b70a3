#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <commnet/costmodel.hpp>
#include <commnet/simulate.hpp>
#include <commnet/stats.hpp>

namespace commnet {

struct ExperimentParams {
  double beta = 1.0;
  double degree_coeff = 1.0;
  CostParams cost;
  std::uint64_t trials = 2000;
  std::uint64_t seed = 0;
  std::uint64_t hop_budget = 0;  // 0 = auto
  Fallback fallback = Fallback::random_neighbor;
  bool analytic_only = false;  // skip graph + trials, keep model columns
};

// One sweep row. Row r runs with seed = base seed + r (echoed here), so any
// row can be regenerated on its own. n is the realized b^h, not the target.
struct SweepRecord {
  std::uint64_t n = 0;
  std::uint64_t b = 0;
  std::uint64_t h = 0;
  std::uint64_t N = 0;
  double beta = 0.0;
  double omega = 0.0;
  double c_k = 0.0;
  std::uint64_t seed = 0;
  double mean_hops = 0.0;
  double failure_rate = 0.0;
  double t_predicted = 0.0;
  double x_objective = 0.0;
  double b_star_continuous = 0.0;
};

// Hybrid strategy: per target, take the continuous optimum b* from
// optimal_fanout, round to an integer b >= 2, snap h = round(log_b target)
// (h >= 2) and realize n = b^h. Targets whose b^h overflows are skipped
// with a warning on stderr.
std::vector<SweepRecord> hybrid_sweep(std::span<const double> n_targets,
                                      const ExperimentParams& params);

// Kleinberg baseline: fanout pinned, h chosen so b^h lands nearest the
// target.
std::vector<SweepRecord> fixed_b_sweep(std::span<const double> n_targets,
                                       std::uint64_t b,
                                       const ExperimentParams& params);

// One row per beta at a fixed tree; everything else shared.
std::vector<SweepRecord> beta_sweep(double n_target, std::uint64_t b,
                                    std::span<const double> betas,
                                    const ExperimentParams& params);

struct FitReport {
  LinearFit model_logn;                // mean_hops ~ a ln N + c
  LinearFit model_logn_over_loglogn;   // mean_hops ~ a ln N / ln ln N + c
  enum class Preferred { logn, logn_over_loglogn } preferred =
      Preferred::logn;
};

// Fits both hop-count models and reports which has lower SSE. At desk scale
// the two regressors differ by a near-constant factor, so the preference is
// descriptive, not a hypothesis test.
FitReport fit_hop_models(std::span<const SweepRecord> records);

struct OmegaRecord {
  double omega = 0.0;
  double b_star = 0.0;
  double t_predicted = 0.0;
};

// b* and predicted time per omega in (0, 1] at fixed n.
std::vector<OmegaRecord> omega_sweep(double n, std::span<const double> omegas,
                                     const ExperimentParams& params);

// CSV/JSON with the SweepRecord fields, in declaration order. Identical
// inputs produce byte-identical output.
void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records);
std::vector<SweepRecord> read_sweep_csv(std::istream& in);
void write_sweep_json(std::ostream& out, std::span<const SweepRecord> records);
void write_omega_csv(std::ostream& out, std::span<const OmegaRecord> records);
void write_omega_json(std::ostream& out, std::span<const OmegaRecord> records);

}  // namespace commnet
