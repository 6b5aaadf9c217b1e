#ifndef MIXPRESERVE_SPECIAL_FUNCTIONS_HPP
#define MIXPRESERVE_SPECIAL_FUNCTIONS_HPP

// Real-valued special functions used by the weight-distribution moments and
// the conditional-gap bound: log-gamma, log-beta, and the (regularized)
// incomplete beta function. All functions are pure and thread-safe.

namespace mixpreserve {

// ln Gamma(x) for x > 0. Lanczos approximation, relative error < 1e-13.
// Throws std::domain_error for x <= 0 or non-finite x.
double log_gamma(double x);

// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b), a, b > 0.
double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation with
// the symmetry switch at x > (a+1)/(a+b+2). Exact 0 at x = 0 and 1 at x = 1.
// Absolute error <= 1e-12 over a, b in [1e-2, 1e4].
double reg_incomplete_beta(double x, double a, double b);

// Unnormalized incomplete beta B(x; a, b) = I_x(a, b) * B(a, b).
double incomplete_beta(double x, double a, double b);

// Standard normal CDF and PDF (used by the Gaussian weight law).
double normal_cdf(double z);
double normal_pdf(double z);

}  // namespace mixpreserve

#endif
