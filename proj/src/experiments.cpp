#include <commnet/experiments.hpp>

#include <charconv>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace commnet {

namespace {

const double kNan = std::numeric_limits<double>::quiet_NaN();

constexpr const char* kSweepHeader =
    "n,b,h,N,beta,omega,c_k,seed,mean_hops,failure_rate,t_predicted,"
    "x_objective,b_star_continuous";

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_double_tok(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("sweep csv: bad numeric field '" + s + "'");
  }
  return v;
}

std::uint64_t parse_u64_tok(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("sweep csv: bad integer field '" + s + "'");
  }
  return v;
}

RoutingConfig routing_config(const ExperimentParams& params) {
  RoutingConfig cfg;
  cfg.hop_budget = params.hop_budget;
  cfg.fallback = params.fallback;
  cfg.kappa3 = params.cost.kappa3;
  cfg.omega = params.cost.omega;
  return cfg;
}

// Generate, route, and fill the model columns for one (b, h) realization.
SweepRecord make_row(std::uint64_t b, std::uint64_t h, double beta,
                     const ExperimentParams& params, std::uint64_t row_seed,
                     double b_star_continuous) {
  const TreeParams tree(b, h);
  SweepRecord row;
  row.n = tree.n;
  row.b = b;
  row.h = h;
  row.N = tree.N;
  row.beta = beta;
  row.omega = params.cost.omega;
  row.c_k = params.degree_coeff;
  row.seed = row_seed;
  row.mean_hops = kNan;
  row.failure_rate = kNan;

  const double n_real = static_cast<double>(tree.n);
  row.t_predicted =
      predicted_total_time(n_real, params.cost, static_cast<double>(b));
  row.x_objective =
      objective(n_real, static_cast<double>(b), params.cost).objective;
  row.b_star_continuous = b_star_continuous;

  if (!params.analytic_only) {
    const GraphParams gp{tree, beta, params.degree_coeff, row_seed};
    const CommunityGraph graph = generate(gp);
    const TrialStats stats =
        run_trials(graph, params.trials, routing_config(params), row_seed);
    row.mean_hops = stats.mean_hops;
    row.failure_rate = stats.failure_rate;
  }
  return row;
}

std::uint64_t round_height(double target, std::uint64_t b) {
  const double h = std::log(target) / std::log(static_cast<double>(b));
  return std::max<std::uint64_t>(
      2, static_cast<std::uint64_t>(std::llround(h)));
}

}  // namespace

std::vector<SweepRecord> hybrid_sweep(std::span<const double> n_targets,
                                      const ExperimentParams& params) {
  validate(params.cost);
  std::vector<SweepRecord> rows;
  rows.reserve(n_targets.size());
  std::uint64_t row_idx = 0;
  std::uint64_t prev_N = 0;
  for (double target : n_targets) {
    if (!(target >= 16.0)) {
      throw std::invalid_argument("hybrid_sweep: every target must be >= 16");
    }
    const OptimumReport rep = optimal_fanout(target, params.cost);
    const std::uint64_t b = std::max<std::uint64_t>(
        2, static_cast<std::uint64_t>(std::llround(rep.b_star)));
    const std::uint64_t h = round_height(target, b);
    try {
      rows.push_back(make_row(b, h, params.beta, params,
                              params.seed + row_idx, rep.b_star));
    } catch (const std::overflow_error& e) {
      std::cerr << "hybrid_sweep: skipping target " << target
                << " (unrealizable: " << e.what() << ")\n";
      ++row_idx;
      continue;
    }
    if (rows.back().N < prev_N) {
      std::cerr << "hybrid_sweep: community count decreased at target "
                << target << "\n";
    }
    prev_N = rows.back().N;
    ++row_idx;
  }
  return rows;
}

std::vector<SweepRecord> fixed_b_sweep(std::span<const double> n_targets,
                                       std::uint64_t b,
                                       const ExperimentParams& params) {
  validate(params.cost);
  if (b < 2) throw std::invalid_argument("fixed_b_sweep: b must be >= 2");
  std::vector<SweepRecord> rows;
  rows.reserve(n_targets.size());
  std::uint64_t row_idx = 0;
  for (double target : n_targets) {
    if (!(target >= 4.0)) {
      throw std::invalid_argument("fixed_b_sweep: every target must be >= 4");
    }
    const std::uint64_t h = round_height(target, b);
    try {
      SweepRecord row =
          make_row(b, h, params.beta, params, params.seed + row_idx, kNan);
      const double n_real = static_cast<double>(row.n);
      if (n_real >= 16.0) {
        row.b_star_continuous = optimal_fanout(n_real, params.cost).b_star;
      }
      rows.push_back(row);
    } catch (const std::overflow_error& e) {
      std::cerr << "fixed_b_sweep: skipping target " << target
                << " (unrealizable: " << e.what() << ")\n";
    }
    ++row_idx;
  }
  return rows;
}

std::vector<SweepRecord> beta_sweep(double n_target, std::uint64_t b,
                                    std::span<const double> betas,
                                    const ExperimentParams& params) {
  validate(params.cost);
  if (b < 2) throw std::invalid_argument("beta_sweep: b must be >= 2");
  if (!(n_target >= 4.0)) {
    throw std::invalid_argument("beta_sweep: target must be >= 4");
  }
  const std::uint64_t h = round_height(n_target, b);
  std::vector<SweepRecord> rows;
  rows.reserve(betas.size());
  std::uint64_t row_idx = 0;
  for (double beta : betas) {
    if (beta < 0.0) {
      throw std::invalid_argument("beta_sweep: beta must be >= 0");
    }
    rows.push_back(
        make_row(b, h, beta, params, params.seed + row_idx, kNan));
    ++row_idx;
  }
  return rows;
}

FitReport fit_hop_models(std::span<const SweepRecord> records) {
  if (records.size() < 5) {
    throw std::invalid_argument("fit_hop_models: need at least 5 records");
  }
  std::vector<double> x1, x2, y;
  for (const SweepRecord& r : records) {
    if (!std::isfinite(r.mean_hops)) {
      throw std::invalid_argument(
          "fit_hop_models: record without measured mean_hops");
    }
    const double lnN = std::log(static_cast<double>(r.N));
    if (!(lnN > 1.0)) {
      throw std::invalid_argument("fit_hop_models: need N > e for ln ln N");
    }
    x1.push_back(lnN);
    x2.push_back(lnN / std::log(lnN));
    y.push_back(r.mean_hops);
  }
  FitReport report;
  report.model_logn = linear_fit(x1, y);
  report.model_logn_over_loglogn = linear_fit(x2, y);
  report.preferred =
      report.model_logn.sse <= report.model_logn_over_loglogn.sse
          ? FitReport::Preferred::logn
          : FitReport::Preferred::logn_over_loglogn;
  return report;
}

std::vector<OmegaRecord> omega_sweep(double n, std::span<const double> omegas,
                                     const ExperimentParams& params) {
  std::vector<OmegaRecord> rows;
  rows.reserve(omegas.size());
  for (double omega : omegas) {
    if (!(omega > 0.0 && omega <= 1.0)) {
      throw std::invalid_argument("omega_sweep: omega must be in (0, 1]");
    }
    CostParams cost = params.cost;
    cost.omega = omega;
    const OptimumReport rep = optimal_fanout(n, cost);
    rows.push_back(
        OmegaRecord{omega, rep.b_star,
                    predicted_total_time(n, cost, rep.b_star)});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out,
                     std::span<const SweepRecord> records) {
  out << kSweepHeader << "\n";
  for (const SweepRecord& r : records) {
    out << r.n << ',' << r.b << ',' << r.h << ',' << r.N << ','
        << format_double(r.beta) << ',' << format_double(r.omega) << ','
        << format_double(r.c_k) << ',' << r.seed << ','
        << format_double(r.mean_hops) << ',' << format_double(r.failure_rate)
        << ',' << format_double(r.t_predicted) << ','
        << format_double(r.x_objective) << ','
        << format_double(r.b_star_continuous) << '\n';
  }
  if (!out) throw std::runtime_error("write_sweep_csv: write failed");
}

std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header != kSweepHeader) {
    throw std::runtime_error("sweep csv: missing or unexpected header row");
  }
  std::vector<SweepRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) fields.push_back(tok);
    if (fields.size() != 13) {
      throw std::runtime_error("sweep csv: expected 13 fields, got " +
                               std::to_string(fields.size()));
    }
    SweepRecord r;
    r.n = parse_u64_tok(fields[0]);
    r.b = parse_u64_tok(fields[1]);
    r.h = parse_u64_tok(fields[2]);
    r.N = parse_u64_tok(fields[3]);
    r.beta = parse_double_tok(fields[4]);
    r.omega = parse_double_tok(fields[5]);
    r.c_k = parse_double_tok(fields[6]);
    r.seed = parse_u64_tok(fields[7]);
    r.mean_hops = parse_double_tok(fields[8]);
    r.failure_rate = parse_double_tok(fields[9]);
    r.t_predicted = parse_double_tok(fields[10]);
    r.x_objective = parse_double_tok(fields[11]);
    r.b_star_continuous = parse_double_tok(fields[12]);
    records.push_back(r);
  }
  return records;
}

namespace {

nlohmann::ordered_json sweep_record_json(const SweepRecord& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["b"] = r.b;
  j["h"] = r.h;
  j["N"] = r.N;
  j["beta"] = r.beta;
  j["omega"] = r.omega;
  j["c_k"] = r.c_k;
  j["seed"] = r.seed;
  j["mean_hops"] = r.mean_hops;
  j["failure_rate"] = r.failure_rate;
  j["t_predicted"] = r.t_predicted;
  j["x_objective"] = r.x_objective;
  j["b_star_continuous"] = r.b_star_continuous;
  return j;
}

}  // namespace

void write_sweep_json(std::ostream& out,
                      std::span<const SweepRecord> records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SweepRecord& r : records) arr.push_back(sweep_record_json(r));
  out << arr.dump(2) << "\n";
  if (!out) throw std::runtime_error("write_sweep_json: write failed");
}

void write_omega_csv(std::ostream& out,
                     std::span<const OmegaRecord> records) {
  out << "omega,b_star,t_predicted\n";
  for (const OmegaRecord& r : records) {
    out << format_double(r.omega) << ',' << format_double(r.b_star) << ','
        << format_double(r.t_predicted) << '\n';
  }
  if (!out) throw std::runtime_error("write_omega_csv: write failed");
}

void write_omega_json(std::ostream& out,
                      std::span<const OmegaRecord> records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const OmegaRecord& r : records) {
    nlohmann::ordered_json j;
    j["omega"] = r.omega;
    j["b_star"] = r.b_star;
    j["t_predicted"] = r.t_predicted;
    arr.push_back(j);
  }
  out << arr.dump(2) << "\n";
  if (!out) throw std::runtime_error("write_omega_json: write failed");
}

}  // namespace commnet
