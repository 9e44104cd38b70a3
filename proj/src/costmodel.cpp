#include <commnet/costmodel.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <commnet/stats.hpp>

namespace commnet {

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::interior:
      return "interior";
    case Boundary::lower:
      return "lower-boundary";
    case Boundary::upper:
      return "upper-boundary";
  }
  return "?";
}

void validate(const CostParams& p) {
  if (!(p.kappa1 > 0.0) || !(p.kappa2 > 0.0) || !(p.kappa3 > 0.0) ||
      !(p.kappa4 > 0.0)) {
    throw std::invalid_argument("CostParams: all kappa constants must be > 0");
  }
  if (!(p.omega >= 0.0 && p.omega <= 1.0)) {
    throw std::invalid_argument("CostParams: omega must be in [0, 1]");
  }
}

void check_domain(double n, double b) {
  if (!(n >= 4.0) || !std::isfinite(n)) {
    throw std::domain_error("cost model: n must be finite and >= 4");
  }
  if (!(b >= 2.0) || !(b <= n / 2.0)) {
    throw std::domain_error("cost model: b must satisfy 2 <= b <= n/2");
  }
}

std::pair<double, double> participation_costs(double n, double b,
                                              const CostParams& p) {
  validate(p);
  check_domain(n, b);
  const double c_local = p.kappa1 * n * (b - 1.0);
  const double lnr = std::log(n / b);
  const double c_global = p.kappa2 * (n / b) * lnr * lnr;
  return {c_local, c_global};
}

std::pair<double, double> comm_times(double n, double b, const CostParams& p) {
  validate(p);
  check_domain(n, b);
  const double t_local = p.kappa3 * std::pow(b, p.omega);
  const double t_global = p.kappa4 * (std::log(n) / std::log(b) - 1.0);
  return {t_local, t_global};
}

CostBreakdown objective(double n, double b, const CostParams& p) {
  const auto [c_local, c_global] = participation_costs(n, b, p);
  const auto [t_local, t_global] = comm_times(n, b, p);
  CostBreakdown out;
  out.c_local = c_local;
  out.c_global = c_global;
  out.t_local = t_local;
  out.t_global = t_global;
  out.objective = std::log(c_local) + std::log(c_global) + t_local + t_global;
  return out;
}

double objective_gradient(double n, double b, const CostParams& p) {
  validate(p);
  check_domain(n, b);
  const double lnb = std::log(b);
  const double lnr = std::log(n / b);
  double grad = 1.0 / (b - 1.0) - 1.0 / b - 2.0 / (b * lnr) -
                p.kappa4 * std::log(n) / (b * lnb * lnb);
  if (p.omega != 0.0) {
    grad += p.kappa3 * p.omega * std::pow(b, p.omega - 1.0);
  }
  return grad;
}

namespace {

double stationarity_lhs(double b, const CostParams& p,
                        StationarityVariant variant) {
  const double lnb = std::log(b);
  const double g = (variant == StationarityVariant::base)
                       ? b
                       : p.omega * std::pow(b, p.omega);
  return g * lnb * lnb;
}

}  // namespace

double stationarity_residual(double n, double b, const CostParams& p,
                             StationarityVariant variant) {
  validate(p);
  check_domain(n, b);
  const double lnb = std::log(b);
  const double g = (variant == StationarityVariant::base)
                       ? b
                       : p.omega * std::pow(b, p.omega);
  return lnb * lnb * (g - 2.0 / std::log(n / b)) - p.kappa4 * std::log(n);
}

double solve_stationarity(double n, const CostParams& p,
                          StationarityVariant variant) {
  validate(p);
  if (!(n >= 16.0)) {
    throw std::invalid_argument("solve_stationarity: n must be >= 16");
  }
  if (variant == StationarityVariant::omega && !(p.omega > 0.0)) {
    throw std::invalid_argument(
        "solve_stationarity: omega variant requires omega > 0");
  }
  const double rhs = p.kappa4 * std::log(n);
  double lo = 1.0 + 1e-12;
  double hi = n / 2.0;
  if (stationarity_lhs(hi, p, variant) < rhs) {
    throw std::domain_error(
        "solve_stationarity: no root in (1, n/2]; the optimum sits at the "
        "upper boundary b = n/2");
  }
  // lhs is strictly increasing on (1, inf) and < rhs near b = 1.
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (stationarity_lhs(mid, p, variant) < rhs) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

OptimumReport optimal_fanout(double n, const CostParams& p) {
  validate(p);
  if (!(n >= 16.0)) {
    throw std::invalid_argument("optimal_fanout: n must be >= 16");
  }
  const double lo = 2.0;
  const double hi = n / 2.0;
  const int grid_points = 512;

  const double lnlo = std::log(lo);
  const double lnhi = std::log(hi);
  auto grid_at = [&](int i) {
    return std::exp(lnlo + (lnhi - lnlo) * static_cast<double>(i) /
                                static_cast<double>(grid_points - 1));
  };
  auto eval = [&](double b) { return objective(n, b, p).objective; };

  int best = 0;
  double best_val = eval(grid_at(0));
  for (int i = 1; i < grid_points; ++i) {
    const double v = eval(grid_at(i));
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }

  // Golden-section on the bracketing cell around the best grid point.
  double a = grid_at(best > 0 ? best - 1 : 0);
  double b = grid_at(best < grid_points - 1 ? best + 1 : grid_points - 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - (b - a) * inv_phi;
  double d = a + (b - a) * inv_phi;
  double fc = eval(c);
  double fd = eval(d);
  while (b - a > 1e-8 * std::max(1.0, std::abs(a))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * inv_phi;
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * inv_phi;
      fd = eval(d);
    }
  }
  double b_star = 0.5 * (a + b);
  double x_star = eval(b_star);
  // Keep the grid winner if refinement did not improve on it.
  if (best_val < x_star) {
    b_star = grid_at(best);
    x_star = best_val;
  }

  OptimumReport report;
  report.b_star = b_star;
  report.x_star = x_star;
  if (b_star <= lo * (1.0 + 1e-6)) {
    report.boundary = Boundary::lower;
    report.b_star = lo;
    report.x_star = eval(lo);
  } else if (b_star >= hi * (1.0 - 1e-6)) {
    report.boundary = Boundary::upper;
    report.b_star = hi;
    report.x_star = eval(hi);
  } else {
    report.boundary = Boundary::interior;
  }
  const StationarityVariant variant = (p.omega == 0.0)
                                          ? StationarityVariant::base
                                          : StationarityVariant::omega;
  report.stationarity_residual =
      stationarity_residual(n, report.b_star, p, variant);
  return report;
}

ScalingFit fit_scaling_exponent(std::span<const double> n_grid,
                                std::span<const double> b_values) {
  if (n_grid.size() != b_values.size()) {
    throw std::invalid_argument(
        "fit_scaling_exponent: n_grid and b_values sizes differ");
  }
  if (n_grid.size() < 8) {
    throw std::invalid_argument(
        "fit_scaling_exponent: need at least 8 grid points");
  }
  double n_min = n_grid[0], n_max = n_grid[0];
  for (double n : n_grid) {
    if (!(n > std::exp(1.0))) {
      throw std::invalid_argument("fit_scaling_exponent: need n > e");
    }
    n_min = std::min(n_min, n);
    n_max = std::max(n_max, n);
  }
  if (n_min == n_max) {
    throw std::invalid_argument(
        "fit_scaling_exponent: degenerate grid (all n equal)");
  }
  if (n_max / n_min < 1073741824.0) {  // 2^30
    throw std::invalid_argument(
        "fit_scaling_exponent: n grid must span at least a 2^30 factor");
  }
  std::vector<double> x, y;
  x.reserve(n_grid.size());
  y.reserve(n_grid.size());
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (!(b_values[i] > 0.0)) {
      throw std::invalid_argument("fit_scaling_exponent: b values must be > 0");
    }
    x.push_back(std::log(std::log(n_grid[i])));
    y.push_back(std::log(b_values[i]));
  }
  const LinearFit fit = linear_fit(x, y);
  return ScalingFit{fit.slope, fit.intercept, fit.r_squared};
}

double predicted_total_time(double n, const CostParams& p, double b) {
  const auto [t_local, t_global] = comm_times(n, b, p);
  return t_local + t_global;
}

}  // namespace commnet
