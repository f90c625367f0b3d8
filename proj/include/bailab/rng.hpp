#pragma once

#include <array>
#include <cstdint>

namespace bailab {

// Distinguishes the independent sub-streams consumed inside one wave.
enum class StreamPurpose : std::uint64_t {
  posterior = 1,  // Monte Carlo draws for probability-of-best
  outcomes = 2,   // Bernoulli outcomes of the wave
  generic = 3,
};

// Counter-keyed random stream: xoshiro256** whose state is expanded by
// splitmix64 from a hash of (master seed, replication, wave, purpose).
// All samplers are implemented here rather than via <random> distributions
// so that draws are bit-identical across standard library implementations.
//
// Consumption per call (in 64-bit words):
//   uniform / uniform_open: 1
//   normal:                 2 per polar-method attempt
//   gamma(a):               Marsaglia-Tsang, one normal and one uniform per
//                           attempt (+1 uniform if a < 1)
//   beta(a, b):             gamma(a) then gamma(b)
//   binomial(n, p):         exactly n (sum of Bernoulli indicators)
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  static RandomStream derive(std::uint64_t master_seed, std::uint64_t replication,
                             std::uint64_t wave, StreamPurpose purpose);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  double normal();
  double gamma(double shape);
  double beta(double a, double b);
  std::int64_t binomial(std::int64_t n, double p);

 private:
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace bailab
