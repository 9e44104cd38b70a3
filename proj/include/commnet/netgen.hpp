#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <commnet/hierarchy.hpp>
#include <commnet/rng.hpp>

namespace commnet {

struct GraphParams {
  TreeParams tree;
  double beta = 1.0;          // link-decay exponent, >= 0
  double degree_coeff = 1.0;  // c in k_target = ceil(c * (log2 N)^2), > 0
  std::uint64_t seed = 0;
};

// Pr[link spans tree distance d], d = 1..H, with
// probs[d-1] proportional to (b-1) * b^(d-1) * b^(-beta*d).
struct LinkDistancePmf {
  std::vector<double> probs;
  double prob(std::uint64_t d) const { return probs.at(d - 1); }
};

// Directed community-level graph. Communities are the vertices; the clique
// inside each community is implicit (distance-1 reachability is structural)
// and never stored. out_links[c] holds distinct neighbors in draw order.
struct CommunityGraph {
  GraphParams params;
  std::uint64_t k_target = 0;
  std::vector<std::vector<CommunityId>> out_links;

  std::uint64_t community_count() const { return params.tree.N; }
};

void validate(const GraphParams& g);

// ceil(degree_coeff * (log2 N)^2), at least 1.
std::uint64_t target_out_degree(const GraphParams& g);

// Normalizing constant Z = sum over d of (b-1) b^(d-1) b^(-beta d).
// At beta == 1 every term equals (b-1)/b, so Z = H(b-1)/b exactly.
double link_pmf_normalizer(const GraphParams& g);

LinkDistancePmf link_distance_pmf(const GraphParams& g);

// Draw one neighbor of c: distance class from the pmf, then uniform within
// that class, so any specific community at distance d has marginal
// probability probs[d] / ((b-1) b^(d-1)), i.e. proportional to b^(-beta d).
CommunityId sample_neighbor(CommunityId c, const GraphParams& g,
                            const LinkDistancePmf& pmf, Rng& rng);
CommunityId sample_neighbor(CommunityId c, const GraphParams& g, Rng& rng);

// Build the graph: every community receives min(k_target, N-1) distinct
// out-neighbors. Each community draws from its own substream (stream index
// = community id), so generation order cannot change the result. Rejection
// sampling caps at 64*k_target draws per community, then switches to
// exhaustive weighted selection without replacement.
CommunityGraph generate(const GraphParams& g);

// Line-oriented text format, lossless round trip:
//   commnet-graph b=<b> h=<h> beta=<beta> c_k=<c_k> seed=<seed>
//   <community_id>: <neighbor_id> <neighbor_id> ...
void save_graph(std::ostream& out, const CommunityGraph& graph);
CommunityGraph load_graph(std::istream& in);
void save_graph_file(const std::string& path, const CommunityGraph& graph);
CommunityGraph load_graph_file(const std::string& path);

}  // namespace commnet
