#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <commnet/netgen.hpp>

namespace commnet {

// What a stalled walk does when no out-link strictly reduces the distance
// to the target: forward to a uniformly random out-neighbor (keeps the
// message alive, Milgram style), or stop and record a failure.
enum class Fallback { random_neighbor, fail_fast };

struct RoutingConfig {
  std::uint64_t hop_budget = 0;  // 0 = auto: max(64, 4 * ceil((log2 N)^2))
  Fallback fallback = Fallback::random_neighbor;
  double kappa3 = 1.0;  // local delivery time scale for modeled_time
  double omega = 0.0;
  bool per_hop_local_time = false;  // charge the clique at every relay
};

std::uint64_t resolve_hop_budget(const RoutingConfig& cfg,
                                 const CommunityGraph& g);

struct SearchOutcome {
  std::uint64_t inter_hops = 0;
  bool success = false;
  std::uint64_t fallback_steps = 0;
  double modeled_time = 0.0;
};

struct TrialRecord {
  std::uint64_t trial_id = 0;
  CommunityId src = 0;
  CommunityId dst = 0;
  SearchOutcome outcome;
};

struct TrialStats {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double mean_hops = 0.0;  // over successful trials
  double std_hops = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  double failure_rate = 0.0;
};

// Greedy decentralized search: at each step look only at the current
// community's own out-links and forward to the one closest to dst in tree
// distance (ties to the lowest id). The walk never consults the global
// adjacency, shortest paths, or any other community's links.
SearchOutcome greedy_route(const CommunityGraph& g, CommunityId src,
                           CommunityId dst, const RoutingConfig& cfg,
                           Rng& rng);

// R independent trials with uniformly drawn src != dst pairs. Trial i draws
// from substream i of `seed`, so results do not depend on execution order.
std::vector<TrialRecord> run_trials_detailed(const CommunityGraph& g,
                                             std::uint64_t trials,
                                             const RoutingConfig& cfg,
                                             std::uint64_t seed);
TrialStats run_trials(const CommunityGraph& g, std::uint64_t trials,
                      const RoutingConfig& cfg, std::uint64_t seed);
TrialStats aggregate_trials(std::span<const TrialRecord> records);

// Deterministic oracle for small graphs: average successful greedy hops over
// all ordered pairs src != dst, routed with the fail-fast fallback. NaN when
// nothing succeeds.
double exhaustive_mean_hops(const CommunityGraph& g, const RoutingConfig& cfg);

// Directed shortest-path oracle; nullopt when dst is unreachable.
std::optional<std::uint64_t> bfs_shortest_hops(const CommunityGraph& g,
                                               CommunityId src,
                                               CommunityId dst);

// CSV with columns trial_id,src,dst,inter_hops,success,fallback_steps,
// modeled_time (success as 0/1).
void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records);

}  // namespace commnet
