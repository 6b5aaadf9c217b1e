#ifndef MIXPRESERVE_WEIGHTS_HPP
#define MIXPRESERVE_WEIGHTS_HPP

#include <string>
#include <variant>

#include "mixpreserve/rng.hpp"

// Mixup weight laws with exact first/second moments, the u-function that
// governs conditional-moment mixing, and deterministic sampling.

namespace mixpreserve {

// W = (1 + eps0 + eps1) V - eps0 with V ~ Beta(alpha, beta);
// support [-eps0, 1 + eps1].
struct EpBeta {
  double alpha;
  double beta;
  double eps0;
  double eps1;
};

// V ~ Beta(alpha, beta) on [0, 1].
struct BetaLaw {
  double alpha;
  double beta;
};

// Unif(0, 1).
struct UniformLaw {};

// N(mu, mu - mu^2); the first and second moments coincide by construction.
// mu in {0, 1} degenerates to a point mass.
struct GaussPreserving {
  double mu;
};

class WeightDistribution {
 public:
  using Variant = std::variant<EpBeta, BetaLaw, UniformLaw, GaussPreserving>;

  WeightDistribution(EpBeta p);           // NOLINT(google-explicit-constructor)
  WeightDistribution(BetaLaw p);          // NOLINT(google-explicit-constructor)
  WeightDistribution(UniformLaw p);       // NOLINT(google-explicit-constructor)
  WeightDistribution(GaussPreserving p);  // NOLINT(google-explicit-constructor)

  const Variant& variant() const { return v_; }

  bool operator==(const WeightDistribution& other) const;

  // lower/upper bound of the support (+-inf for the Gaussian law)
  double support_min() const;
  double support_max() const;

  // Tagged JSON, e.g. {"kind":"epbeta","alpha":...,"beta":...,"eps0":...,"eps1":...}
  std::string to_json() const;
  static WeightDistribution from_json(const std::string& text);

 private:
  Variant v_;
};

// Exact E[W].
double mean(const WeightDistribution& dist);

// Exact E[W^2].
double second_moment(const WeightDistribution& dist);

// Var[synthetic] / Var[original] = 1 + 2 (E[W^2] - E[W]); always >= 0.
double variance_scale(const WeightDistribution& dist);

enum class JointScheme { kEqual, kIndependent };

// Cov[synthetic] / Cov[original]. kEqual requires dx == dy and reduces to
// variance_scale; kIndependent uses 1 + 2 E[Wx] E[Wy] - E[Wx] - E[Wy].
double covariance_scale(const WeightDistribution& dx, const WeightDistribution& dy,
                        JointScheme joint);

// |E[W^2] - E[W]| <= tol
bool is_variance_preserving(const WeightDistribution& dist, double tol);

// u(W, tau) = E[(1-W) 1{W >= tau} + W 1{W < tau}] for any real tau.
double u_value(const WeightDistribution& dist, double tau);

// One draw from dist using the caller's stream.
double sample(const WeightDistribution& dist, RngStream& rng);

}  // namespace mixpreserve

#endif
