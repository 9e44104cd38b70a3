#include <commnet/netgen.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>

namespace commnet {

namespace {

// Family tag so graph substreams never collide with trial substreams
// derived from the same user seed.
constexpr std::uint64_t kGraphStreamTag = 0x636f6d6d6e657447ULL;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_double(const std::string& s, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error(std::string("graph file: bad ") + what + " '" +
                             s + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error(std::string("graph file: bad ") + what + " '" +
                             s + "'");
  }
  return v;
}

}  // namespace

void validate(const GraphParams& g) {
  if (g.beta < 0.0 || !std::isfinite(g.beta)) {
    throw std::invalid_argument("GraphParams: beta must be finite and >= 0");
  }
  if (g.degree_coeff <= 0.0 || !std::isfinite(g.degree_coeff)) {
    throw std::invalid_argument(
        "GraphParams: degree_coeff must be finite and > 0");
  }
}

std::uint64_t target_out_degree(const GraphParams& g) {
  validate(g);
  const double log2N = std::log2(static_cast<double>(g.tree.N));
  const double k = std::ceil(g.degree_coeff * log2N * log2N);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(k));
}

double link_pmf_normalizer(const GraphParams& g) {
  validate(g);
  const double b = static_cast<double>(g.tree.b);
  double z = 0.0;
  for (std::uint64_t d = 1; d <= g.tree.H; ++d) {
    z += (b - 1.0) * std::pow(b, static_cast<double>(d) - 1.0) *
         std::pow(b, -g.beta * static_cast<double>(d));
  }
  return z;
}

LinkDistancePmf link_distance_pmf(const GraphParams& g) {
  validate(g);
  if (g.tree.H == 0) {
    throw std::domain_error(
        "link_distance_pmf: single community (H = 0), no inter-community "
        "links exist");
  }
  const double b = static_cast<double>(g.tree.b);
  LinkDistancePmf pmf;
  pmf.probs.resize(g.tree.H);
  double z = 0.0;
  for (std::uint64_t d = 1; d <= g.tree.H; ++d) {
    const double w = (b - 1.0) * std::pow(b, static_cast<double>(d) - 1.0) *
                     std::pow(b, -g.beta * static_cast<double>(d));
    pmf.probs[d - 1] = w;
    z += w;
  }
  for (double& p : pmf.probs) p /= z;
  return pmf;
}

CommunityId sample_neighbor(CommunityId c, const GraphParams& g,
                            const LinkDistancePmf& pmf, Rng& rng) {
  if (g.tree.N < 2) {
    throw std::invalid_argument("sample_neighbor: need at least 2 communities");
  }
  check_community(c, g.tree, "sample_neighbor");
  // CDF walk; the final class absorbs any floating-point slack.
  const double u = rng.uniform01();
  double acc = 0.0;
  std::uint64_t d = g.tree.H;
  for (std::uint64_t i = 1; i <= g.tree.H; ++i) {
    acc += pmf.prob(i);
    if (u < acc) {
      d = i;
      break;
    }
  }
  const std::uint64_t count = communities_at_distance_count(d, g.tree);
  return community_at_distance(c, d, rng.uniform_below(count), g.tree);
}

CommunityId sample_neighbor(CommunityId c, const GraphParams& g, Rng& rng) {
  const LinkDistancePmf pmf = link_distance_pmf(g);
  return sample_neighbor(c, g, pmf, rng);
}

namespace {

// Weighted selection without replacement over all remaining candidates;
// used when rejection sampling cannot fill the neighbor list.
void exhaustive_fill(CommunityId c, const GraphParams& g,
                     std::vector<CommunityId>& links,
                     std::unordered_set<CommunityId>& seen,
                     std::uint64_t want, Rng& rng) {
  const double b = static_cast<double>(g.tree.b);
  std::vector<CommunityId> ids;
  std::vector<double> weights;
  ids.reserve(g.tree.N - 1);
  weights.reserve(g.tree.N - 1);
  for (CommunityId other = 0; other < g.tree.N; ++other) {
    if (other == c || seen.count(other)) continue;
    ids.push_back(other);
    weights.push_back(std::pow(
        b, -g.beta * static_cast<double>(community_distance(c, other, g.tree))));
  }
  double total = 0.0;
  for (double w : weights) total += w;
  while (links.size() < want && !ids.empty()) {
    double u = rng.uniform01() * total;
    std::size_t pick = ids.size() - 1;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) {
        pick = i;
        break;
      }
    }
    links.push_back(ids[pick]);
    seen.insert(ids[pick]);
    total -= weights[pick];
    ids.erase(ids.begin() + pick);
    weights.erase(weights.begin() + pick);
  }
}

}  // namespace

CommunityGraph generate(const GraphParams& g) {
  validate(g);
  CommunityGraph graph;
  graph.params = g;
  graph.k_target = target_out_degree(g);
  graph.out_links.resize(g.tree.N);

  if (g.tree.N < 2) return graph;  // single community, no inter-links

  const LinkDistancePmf pmf = link_distance_pmf(g);
  const std::uint64_t want = std::min(graph.k_target, g.tree.N - 1);
  const std::uint64_t cap = 64 * graph.k_target;
  const std::uint64_t family_seed = mix64(g.seed ^ kGraphStreamTag);

  for (CommunityId c = 0; c < g.tree.N; ++c) {
    Rng rng = stream_rng(family_seed, c);
    auto& links = graph.out_links[c];
    links.reserve(want);
    std::unordered_set<CommunityId> seen;
    std::uint64_t attempts = 0;
    while (links.size() < want && attempts < cap) {
      const CommunityId pick = sample_neighbor(c, g, pmf, rng);
      ++attempts;
      if (seen.insert(pick).second) links.push_back(pick);
    }
    if (links.size() < want) {
      exhaustive_fill(c, g, links, seen, want, rng);
    }
  }
  return graph;
}

void save_graph(std::ostream& out, const CommunityGraph& graph) {
  const GraphParams& g = graph.params;
  out << "commnet-graph b=" << g.tree.b << " h=" << g.tree.h
      << " beta=" << format_double(g.beta)
      << " c_k=" << format_double(g.degree_coeff) << " seed=" << g.seed
      << "\n";
  for (CommunityId c = 0; c < g.tree.N; ++c) {
    out << c << ":";
    for (CommunityId nb : graph.out_links[c]) out << " " << nb;
    out << "\n";
  }
  if (!out) throw std::runtime_error("save_graph: write failed");
}

CommunityGraph load_graph(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("graph file: missing header line");
  }
  std::istringstream hs(header);
  std::string magic;
  hs >> magic;
  if (magic != "commnet-graph") {
    throw std::runtime_error("graph file: bad magic '" + magic + "'");
  }
  std::uint64_t b = 0, h = 0, seed = 0;
  double beta = -1.0, c_k = -1.0;
  bool have_b = false, have_h = false, have_beta = false, have_ck = false,
       have_seed = false;
  std::string kv;
  while (hs >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("graph file: malformed header field '" + kv +
                               "'");
    }
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    if (key == "b") {
      b = parse_u64(val, "b");
      have_b = true;
    } else if (key == "h") {
      h = parse_u64(val, "h");
      have_h = true;
    } else if (key == "beta") {
      beta = parse_double(val, "beta");
      have_beta = true;
    } else if (key == "c_k") {
      c_k = parse_double(val, "c_k");
      have_ck = true;
    } else if (key == "seed") {
      seed = parse_u64(val, "seed");
      have_seed = true;
    } else {
      throw std::runtime_error("graph file: unknown header key '" + key + "'");
    }
  }
  if (!(have_b && have_h && have_beta && have_ck && have_seed)) {
    throw std::runtime_error(
        "graph file: header must carry b, h, beta, c_k, seed");
  }

  GraphParams params{TreeParams(b, h), beta, c_k, seed};
  validate(params);
  CommunityGraph graph;
  graph.params = params;
  graph.k_target = target_out_degree(params);
  graph.out_links.resize(params.tree.N);

  std::string line;
  std::uint64_t lineno = 1;
  std::uint64_t rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw std::runtime_error("graph file line " + std::to_string(lineno) +
                               ": missing ':'");
    }
    const CommunityId c = parse_u64(line.substr(0, colon), "community id");
    check_community(c, params.tree, "load_graph");
    auto& links = graph.out_links[c];
    if (!links.empty()) {
      throw std::runtime_error("graph file line " + std::to_string(lineno) +
                               ": duplicate row for community " +
                               std::to_string(c));
    }
    std::istringstream ls(line.substr(colon + 1));
    std::string tok;
    while (ls >> tok) {
      const CommunityId nb = parse_u64(tok, "neighbor id");
      check_community(nb, params.tree, "load_graph");
      if (nb == c) {
        throw std::runtime_error("graph file line " + std::to_string(lineno) +
                                 ": self-link on community " +
                                 std::to_string(c));
      }
      links.push_back(nb);
    }
    ++rows;
  }
  if (rows != params.tree.N) {
    throw std::runtime_error("graph file: expected " +
                             std::to_string(params.tree.N) + " rows, got " +
                             std::to_string(rows));
  }
  return graph;
}

void save_graph_file(const std::string& path, const CommunityGraph& graph) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  save_graph(out, graph);
}

CommunityGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return load_graph(in);
}

}  // namespace commnet
