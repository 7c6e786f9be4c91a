#ifndef BVPARETO_RNG_HPP
#define BVPARETO_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace bvpareto {

// Identifies one reproducible random stream. Identical (seed, stream)
// always reproduces the identical sequence; independent stream ids give
// independent streams for concurrent work.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Value-semantics generator. Uniform doubles come from the top 53 bits of
// mt19937_64 output, so sequences are bit-identical across platforms and
// standard-library versions.
class Rng {
 public:
  explicit Rng(RngStream s) : stream_(s) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32),
        static_cast<std::uint32_t>(s.stream), static_cast<std::uint32_t>(s.stream >> 32)};
    gen_.seed(seq);
  }

  RngStream stream() const { return stream_; }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0,1): never returns 1.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + uniform01() * (b - a); }

  // Rate-1 exponential via inversion; finite because uniform01() < 1.
  double exponential() { return -std::log1p(-uniform01()); }

 private:
  RngStream stream_{};
  std::mt19937_64 gen_;
};

}  // namespace bvpareto

#endif
