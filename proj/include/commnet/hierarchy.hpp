#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace commnet {

using NodeId = std::uint64_t;
using CommunityId = std::uint64_t;

// Balanced b-ary hierarchy over n = b^h leaves. A community is the group of
// b leaves under one level-1 parent, so there are N = b^(h-1) communities and
// the community tree itself is b-ary with height H = h-1.
//
// Convention: leaves sit at level 0 and distance is the level of the lowest
// common ancestor, so sibling leaves are at distance 1 and the root is at
// level h. Nothing is materialized; ids are length-h base-b digit strings
// (most significant digit first, leaves indexed left to right) and every
// query is digit arithmetic.

inline std::uint64_t checked_pow_u64(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / base) {
      throw std::overflow_error("checked_pow_u64: " + std::to_string(base) +
                                "^" + std::to_string(exp) +
                                " does not fit in 64 bits");
    }
    r *= base;
  }
  return r;
}

struct TreeParams {
  std::uint64_t b;  // fanout == community size
  std::uint64_t h;  // tree height
  std::uint64_t n;  // leaf count, b^h
  std::uint64_t N;  // community count, b^(h-1)
  std::uint64_t H;  // community-tree height, h-1

  TreeParams(std::uint64_t fanout, std::uint64_t height)
      : b(fanout), h(height) {
    if (b < 2) throw std::invalid_argument("TreeParams: fanout b must be >= 2");
    if (h < 1) throw std::invalid_argument("TreeParams: height h must be >= 1");
    n = checked_pow_u64(b, h);
    N = n / b;
    H = h - 1;
  }
};

inline void check_node(NodeId u, const TreeParams& p, const char* who) {
  if (u >= p.n) {
    throw std::invalid_argument(std::string(who) + ": node id " +
                                std::to_string(u) + " out of range [0, " +
                                std::to_string(p.n) + ")");
  }
}

inline void check_community(CommunityId c, const TreeParams& p,
                            const char* who) {
  if (c >= p.N) {
    throw std::invalid_argument(std::string(who) + ": community id " +
                                std::to_string(c) + " out of range [0, " +
                                std::to_string(p.N) + ")");
  }
}

// Level of the lowest common ancestor of two leaves; 0 iff u == v, h when
// the LCA is the root. Dividing by b moves one level up the tree.
inline std::uint64_t social_distance(NodeId u, NodeId v, const TreeParams& p) {
  check_node(u, p, "social_distance");
  check_node(v, p, "social_distance");
  std::uint64_t d = 0;
  while (u != v) {
    u /= p.b;
    v /= p.b;
    ++d;
  }
  return d;
}

inline CommunityId community_of(NodeId u, const TreeParams& p) {
  check_node(u, p, "community_of");
  return u / p.b;
}

// social_distance on the community tree (fanout b, height H); range 0..H.
inline std::uint64_t community_distance(CommunityId c1, CommunityId c2,
                                        const TreeParams& p) {
  check_community(c1, p, "community_distance");
  check_community(c2, p, "community_distance");
  std::uint64_t d = 0;
  while (c1 != c2) {
    c1 /= p.b;
    c2 /= p.b;
    ++d;
  }
  return d;
}

// Number of communities at distance exactly d from any fixed community.
inline std::uint64_t communities_at_distance_count(std::uint64_t d,
                                                   const TreeParams& p) {
  if (d < 1 || d > p.H) {
    throw std::invalid_argument(
        "communities_at_distance: distance " + std::to_string(d) +
        " out of range [1, " + std::to_string(p.H) + "]");
  }
  return (p.b - 1) * checked_pow_u64(p.b, d - 1);
}

// The communities at distance exactly d from c form the level-d block around
// c minus its level-(d-1) sub-block. idx enumerates them in ascending order.
inline CommunityId community_at_distance(CommunityId c, std::uint64_t d,
                                         std::uint64_t idx,
                                         const TreeParams& p) {
  check_community(c, p, "community_at_distance");
  const std::uint64_t count = communities_at_distance_count(d, p);
  if (idx >= count) {
    throw std::invalid_argument("community_at_distance: index out of range");
  }
  const std::uint64_t sub = checked_pow_u64(p.b, d - 1);  // sub-block width
  const std::uint64_t block_lo = c / (sub * p.b) * (sub * p.b);
  const std::uint64_t sub_lo = c / sub * sub;
  CommunityId id = block_lo + idx;
  if (id >= sub_lo) id += sub;
  return id;
}

inline std::vector<CommunityId> communities_at_distance(CommunityId c,
                                                        std::uint64_t d,
                                                        const TreeParams& p) {
  check_community(c, p, "communities_at_distance");
  const std::uint64_t count = communities_at_distance_count(d, p);
  std::vector<CommunityId> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(community_at_distance(c, d, i, p));
  }
  return out;
}

}  // namespace commnet
