#ifndef MIXPRESERVE_RNG_HPP
#define MIXPRESERVE_RNG_HPP

#include <cstdint>

// Counter-based deterministic random streams. A stream is keyed by
// (seed, stream id); synthesis uses one stream per output row so rows can be
// generated in any order, in parallel, with identical results.

namespace mixpreserve {

// splitmix64 finalizer; good avalanche, used for key derivation.
std::uint64_t mix64(std::uint64_t z);

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  // uniform on [0, 1), 53-bit resolution
  double uniform();
  // uniform on (0, 1]; safe as a log() argument
  double uniform_pos();
  // uniform integer on [0, n), n >= 1
  std::uint64_t uniform_index(std::uint64_t n);
  // standard normal (Box-Muller)
  double normal();
  // Gamma(shape, 1) via Marsaglia-Tsang, shape >= 1
  double gamma(double shape);
  // ln of a Gamma(shape, 1) draw; stable for arbitrarily small shapes
  double log_gamma_variate(double shape);
  // Beta(a, b) computed through log-gamma draws; never NaN for tiny shapes
  double beta(double a, double b);

 private:
  std::uint64_t state_;
};

}  // namespace mixpreserve

#endif
