#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace commnet {

// splitmix64 finalizer; good bit mixing for deriving substream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// mt19937_64 plus hand-rolled draw helpers. The standard pins down the raw
// engine sequence but not the <random> distributions, so bounded ints and
// doubles are produced here to keep results bit-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Unbiased integer in [0, bound) via modulo rejection.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound == 0");
    const std::uint64_t cut = (0 - bound) % bound;  // 2^64 mod bound
    std::uint64_t x = gen_();
    while (x < cut) x = gen_();
    return x % bound;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

// Independent substream: derived seeds are decorrelated by double mixing, so
// stream i can be drawn from without consuming stream j. Callers that need
// several stream families from one user seed should first remix the seed
// with a family tag.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(mix64(seed ^ mix64(stream)));
}

}  // namespace commnet
