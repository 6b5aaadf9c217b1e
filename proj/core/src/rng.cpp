#include "mixpreserve/rng.hpp"

#include <cmath>

namespace mixpreserve {

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(mix64(seed + 0x9E3779B97F4A7C15ULL) ^
                   (stream + 0xD1B54A32D192ED03ULL))) {}

std::uint64_t RngStream::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  // Lemire multiply-shift; slight modulo bias < 2^-64 * n, irrelevant here.
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

double RngStream::normal() {
  const double u1 = uniform_pos();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double RngStream::gamma(double shape) {
  // Marsaglia-Tsang squeeze; requires shape >= 1
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngStream::log_gamma_variate(double shape) {
  if (shape >= 1.0) return std::log(gamma(shape));
  // boost the shape by one; G(a) ~ G(a+1) * U^(1/a), done in log space so
  // shapes like 0.01 do not underflow
  return std::log(gamma(shape + 1.0)) + std::log(uniform_pos()) / shape;
}

double RngStream::beta(double a, double b) {
  const double lga = log_gamma_variate(a);
  const double lgb = log_gamma_variate(b);
  // Ga / (Ga + Gb) = 1 / (1 + exp(lgb - lga))
  const double diff = lgb - lga;
  if (diff > 700.0) return 0.0;
  if (diff < -700.0) return 1.0;
  return 1.0 / (1.0 + std::exp(diff));
}

}  // namespace mixpreserve
