#pragma once

#include <span>
#include <string>
#include <utility>

namespace commnet {

// Closed-form cost/time model over continuous community size b:
//
//   c_local  = kappa1 * n * (b - 1)         link upkeep inside cliques
//   c_global = kappa2 * (n/b) * ln(n/b)^2   link upkeep across communities
//   t_local  = kappa3 * b^omega             in-community delivery time
//   t_global = kappa4 * (ln n / ln b - 1)   cross-community delivery time
//   X        = ln c_local + ln c_global + t_local + t_global
//
// Natural log throughout (log base only shifts the free kappa constants);
// the lone log_b lives in t_global. Domain: n >= 4, 2 <= b <= n/2, which
// keeps both costs positive and ln(n/b) away from 0. b stays continuous
// here; integerization is the sweep harness's job.

struct CostParams {
  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double kappa3 = 1.0;
  double kappa4 = 1.0;
  double omega = 0.0;  // 0 = constant-overhead technology, 1 = serial relay
};

struct CostBreakdown {
  double c_local = 0.0;
  double c_global = 0.0;
  double t_local = 0.0;
  double t_global = 0.0;
  double objective = 0.0;
};

enum class Boundary { interior, lower, upper };
std::string to_string(Boundary b);

struct OptimumReport {
  double b_star = 0.0;
  double x_star = 0.0;
  Boundary boundary = Boundary::interior;
  double stationarity_residual = 0.0;
};

// Two first-order-optimum shapes: the base model treats t_local as constant
// (its condition reads (ln b)^2 [b - 2/ln(n/b)] = kappa4 ln n); the omega
// variant replaces the bracketed b with omega * b^omega.
enum class StationarityVariant { base, omega };

struct ScalingFit {
  double epsilon = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

void validate(const CostParams& p);
void check_domain(double n, double b);

std::pair<double, double> participation_costs(double n, double b,
                                              const CostParams& p);
std::pair<double, double> comm_times(double n, double b, const CostParams& p);
CostBreakdown objective(double n, double b, const CostParams& p);

// Exact dX/db, retaining the d/db ln(b-1) = 1/(b-1) term:
//   1/(b-1) - 1/b - 2/(b ln(n/b)) + kappa3 omega b^(omega-1)
//   - kappa4 ln n / (b (ln b)^2)
double objective_gradient(double n, double b, const CostParams& p);

// (ln b)^2 (g(b) - 2/ln(n/b)) - kappa4 ln n with g per the variant;
// zero at the model's claimed optimum.
double stationarity_residual(double n, double b, const CostParams& p,
                             StationarityVariant variant);

// Root of the limit form g(b) (ln b)^2 = kappa4 ln n in (1, n/2], found by
// bisection (the left side is strictly increasing for b > 1). Throws when
// no root exists in the interval, e.g. the omega variant as omega -> 0.
double solve_stationarity(double n, const CostParams& p,
                          StationarityVariant variant);

// Minimize the exact X over b in [2, n/2]: 512-point log-spaced grid scan,
// then golden-section refinement of the bracketing cell to 1e-8 relative.
// Grid-then-refine because X is not guaranteed unimodal over the domain.
OptimumReport optimal_fanout(double n, const CostParams& p);

// OLS of ln b against ln ln n. Needs >= 8 points spanning at least a 2^30
// factor in n.
ScalingFit fit_scaling_exponent(std::span<const double> n_grid,
                                std::span<const double> b_values);

// t_local + t_global at the given (n, b).
double predicted_total_time(double n, const CostParams& p, double b);

}  // namespace commnet
