#include <commnet/simulate.hpp>

#include <charconv>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <commnet/stats.hpp>

namespace commnet {

namespace {

constexpr std::uint64_t kTrialStreamTag = 0x636f6d6d6e657454ULL;

const double kNan = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Pick among `links` only: lowest tree distance to dst, ties to lowest id.
// Keeping the choice a pure function of the local link list is what makes
// the search decentralized.
CommunityId best_neighbor(std::span<const CommunityId> links, CommunityId dst,
                          const TreeParams& tree, std::uint64_t& best_dist) {
  CommunityId best = links[0];
  best_dist = community_distance(links[0], dst, tree);
  for (std::size_t i = 1; i < links.size(); ++i) {
    const std::uint64_t d = community_distance(links[i], dst, tree);
    if (d < best_dist || (d == best_dist && links[i] < best)) {
      best = links[i];
      best_dist = d;
    }
  }
  return best;
}

}  // namespace

std::uint64_t resolve_hop_budget(const RoutingConfig& cfg,
                                 const CommunityGraph& g) {
  if (cfg.hop_budget > 0) return cfg.hop_budget;
  const double log2N = std::log2(static_cast<double>(g.community_count()));
  const std::uint64_t quad =
      static_cast<std::uint64_t>(4.0 * std::ceil(log2N * log2N));
  return std::max<std::uint64_t>(64, quad);
}

SearchOutcome greedy_route(const CommunityGraph& g, CommunityId src,
                           CommunityId dst, const RoutingConfig& cfg,
                           Rng& rng) {
  const TreeParams& tree = g.params.tree;
  check_community(src, tree, "greedy_route");
  check_community(dst, tree, "greedy_route");

  const std::uint64_t budget = resolve_hop_budget(cfg, g);
  SearchOutcome out;
  CommunityId cur = src;
  while (cur != dst && out.inter_hops < budget) {
    const auto& links = g.out_links[cur];
    if (links.empty()) break;
    std::uint64_t best_dist = 0;
    const CommunityId best = best_neighbor(links, dst, tree, best_dist);
    if (best_dist < community_distance(cur, dst, tree)) {
      cur = best;
    } else if (cfg.fallback == Fallback::random_neighbor) {
      cur = links[rng.uniform_below(links.size())];
      ++out.fallback_steps;
    } else {
      break;  // fail fast on a stall
    }
    ++out.inter_hops;
  }
  out.success = (cur == dst);
  // One time unit per inter-community hop plus the in-clique delivery cost,
  // charged at the two endpoints only unless per-hop charging is on.
  const double local = cfg.kappa3 * std::pow(static_cast<double>(tree.b),
                                             cfg.omega);
  const double local_charges =
      cfg.per_hop_local_time ? static_cast<double>(out.inter_hops) + 1.0 : 2.0;
  out.modeled_time =
      static_cast<double>(out.inter_hops) + local_charges * local;
  return out;
}

std::vector<TrialRecord> run_trials_detailed(const CommunityGraph& g,
                                             std::uint64_t trials,
                                             const RoutingConfig& cfg,
                                             std::uint64_t seed) {
  if (trials < 1) {
    throw std::invalid_argument("run_trials: need at least 1 trial");
  }
  const std::uint64_t N = g.community_count();
  if (N < 2) {
    throw std::invalid_argument(
        "run_trials: need at least 2 communities to draw src != dst");
  }
  const std::uint64_t family_seed = mix64(seed ^ kTrialStreamTag);
  std::vector<TrialRecord> records(trials);
  for (std::uint64_t i = 0; i < trials; ++i) {
    Rng rng = stream_rng(family_seed, i);
    CommunityId src = rng.uniform_below(N);
    CommunityId dst = rng.uniform_below(N);
    while (src == dst) {
      src = rng.uniform_below(N);
      dst = rng.uniform_below(N);
    }
    records[i].trial_id = i;
    records[i].src = src;
    records[i].dst = dst;
    records[i].outcome = greedy_route(g, src, dst, cfg, rng);
  }
  return records;
}

TrialStats aggregate_trials(std::span<const TrialRecord> records) {
  if (records.empty()) {
    throw std::invalid_argument("aggregate_trials: no records");
  }
  TrialStats stats;
  stats.trials = records.size();
  std::vector<double> hops;
  hops.reserve(records.size());
  for (const TrialRecord& r : records) {
    if (r.outcome.success) {
      hops.push_back(static_cast<double>(r.outcome.inter_hops));
    }
  }
  stats.successes = hops.size();
  stats.failure_rate =
      static_cast<double>(stats.trials - stats.successes) /
      static_cast<double>(stats.trials);
  if (hops.empty()) {
    stats.mean_hops = kNan;
    stats.std_hops = kNan;
    stats.p50 = kNan;
    stats.p95 = kNan;
    return stats;
  }
  double sum = 0.0;
  for (double v : hops) sum += v;
  stats.mean_hops = sum / static_cast<double>(hops.size());
  double ss = 0.0;
  for (double v : hops) {
    const double d = v - stats.mean_hops;
    ss += d * d;
  }
  stats.std_hops =
      hops.size() > 1 ? std::sqrt(ss / static_cast<double>(hops.size() - 1))
                      : 0.0;
  stats.p50 = percentile(hops, 0.50);
  stats.p95 = percentile(hops, 0.95);
  return stats;
}

TrialStats run_trials(const CommunityGraph& g, std::uint64_t trials,
                      const RoutingConfig& cfg, std::uint64_t seed) {
  return aggregate_trials(run_trials_detailed(g, trials, cfg, seed));
}

double exhaustive_mean_hops(const CommunityGraph& g,
                            const RoutingConfig& cfg) {
  const std::uint64_t N = g.community_count();
  if (N > 256) {
    throw std::invalid_argument(
        "exhaustive_mean_hops: oracle limited to N <= 256");
  }
  RoutingConfig det = cfg;
  det.fallback = Fallback::fail_fast;
  Rng rng(0);  // never consulted under fail-fast
  double sum = 0.0;
  std::uint64_t successes = 0;
  for (CommunityId src = 0; src < N; ++src) {
    for (CommunityId dst = 0; dst < N; ++dst) {
      if (src == dst) continue;
      const SearchOutcome out = greedy_route(g, src, dst, det, rng);
      if (out.success) {
        sum += static_cast<double>(out.inter_hops);
        ++successes;
      }
    }
  }
  return successes == 0 ? kNan : sum / static_cast<double>(successes);
}

std::optional<std::uint64_t> bfs_shortest_hops(const CommunityGraph& g,
                                               CommunityId src,
                                               CommunityId dst) {
  const TreeParams& tree = g.params.tree;
  check_community(src, tree, "bfs_shortest_hops");
  check_community(dst, tree, "bfs_shortest_hops");
  if (src == dst) return 0;
  std::vector<std::uint64_t> dist(tree.N,
                                  std::numeric_limits<std::uint64_t>::max());
  std::deque<CommunityId> queue;
  dist[src] = 0;
  queue.push_back(src);
  while (!queue.empty()) {
    const CommunityId cur = queue.front();
    queue.pop_front();
    for (CommunityId nb : g.out_links[cur]) {
      if (dist[nb] != std::numeric_limits<std::uint64_t>::max()) continue;
      dist[nb] = dist[cur] + 1;
      if (nb == dst) return dist[nb];
      queue.push_back(nb);
    }
  }
  return std::nullopt;
}

void write_trials_csv(std::ostream& out,
                      std::span<const TrialRecord> records) {
  out << "trial_id,src,dst,inter_hops,success,fallback_steps,modeled_time\n";
  for (const TrialRecord& r : records) {
    out << r.trial_id << ',' << r.src << ',' << r.dst << ','
        << r.outcome.inter_hops << ',' << (r.outcome.success ? 1 : 0) << ','
        << r.outcome.fallback_steps << ','
        << format_double(r.outcome.modeled_time) << '\n';
  }
  if (!out) throw std::runtime_error("write_trials_csv: write failed");
}

}  // namespace commnet
