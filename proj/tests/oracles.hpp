#ifndef MIXPRESERVE_TESTS_ORACLES_HPP
#define MIXPRESERVE_TESTS_ORACLES_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "mixpreserve/weights.hpp"

// Independent numerical oracles used by the tests. Nothing here calls the
// continued-fraction incomplete beta or the closed-form u expressions it
// checks; everything is plain quadrature, enumeration, or dense algebra.

namespace mixpreserve::testing {

// adaptive Simpson with mixed absolute/relative tolerance
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol);

// B(x; a, b) by quadrature with power substitutions at the endpoints, so
// integrable singularities (a < 1 or b < 1) are transformed away.
double incomplete_beta_quad(double x, double a, double b);

// I_x(a, b) = B(x; a, b) / B(1; a, b), both sides by quadrature.
double reg_incomplete_beta_quad(double x, double a, double b);

// E[(1-W) 1{W >= tau} + W 1{W < tau}] by integrating the density of the law.
double u_quad(const WeightDistribution& dist, double tau);

// E[W] and E[W^2] by quadrature over the density.
double mean_quad(const WeightDistribution& dist);
double second_moment_quad(const WeightDistribution& dist);

// discrete weight law for exhaustive conditional-moment checks
struct AtomLaw {
  std::vector<double> atoms;
  std::vector<double> probs;

  double u(double tau) const;
  double mean() const;
  double second_moment() const;
};

// random atom law with E[W^2] = E[W] exactly (mixes atoms inside and
// outside [0,1] with balancing probabilities)
AtomLaw random_preserving_atoms(RngStream& rng, int inside, int outside);

// random unconstrained atom law supported in [lo, hi]
AtomLaw random_atoms(RngStream& rng, int count, double lo, double hi);

// exact population moments of the synthetic conditional distribution,
// enumerating every (i, j, atom) outcome of standard-scheme mixup
struct EnumeratedConditional {
  double label_probability;   // P{synthetic label = category}
  double conditional_mean;    // E[synthetic X | synthetic L = category]
  double conditional_variance;  // population variance of the same
};

EnumeratedConditional enumerate_conditional(const std::vector<double>& x,
                                            const std::vector<std::uint32_t>& labels,
                                            const AtomLaw& law, double tau,
                                            std::uint32_t category);

// least squares through explicitly formed normal equations (partial-pivot
// Gaussian elimination); the independent route for checking ols_fit
std::vector<double> normal_equations_fit(
    const std::vector<std::vector<double>>& design_rows,
    const std::vector<double>& target, bool intercept);

}  // namespace mixpreserve::testing

#endif
