#ifndef MIXPRESERVE_EPBETA_SOLVER_HPP
#define MIXPRESERVE_EPBETA_SOLVER_HPP

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mixpreserve/weights.hpp"

// Finds EpBeta shape pairs (alpha, beta), alpha >= beta, on the
// variance-preservation curve
//   (1+eps1-eps0 b/a)(1+eps0-eps1 a/b)(1+a+b) = (1+eps0+eps1)^2
// whose u-value at the cut point does not exceed delta, returning the
// feasible pair with minimal alpha.

namespace mixpreserve {

struct SolverRequest {
  double eps0 = 0.0;
  double eps1 = 0.0;
  double delta = 0.0;
  double tau = 0.5;
};

struct EpBetaParams {
  double alpha;
  double beta;
  double eps0;
  double eps1;
  double u_at_half;           // u of the solved law at the requested tau
  double constraint_residual; // curve-equation residual at (alpha, beta)

  EpBeta law() const { return EpBeta{alpha, beta, eps0, eps1}; }
};

// eps0 = eps1 = 0: no weight law supported on [0,1] preserves variance
// short of a {0,1} resample.
class NoPreservingParamsError : public std::domain_error {
 public:
  NoPreservingParamsError()
      : std::domain_error(
            "no structure-preserving parameters: eps0 + eps1 must be positive") {}
};

// delta not attainable on the curve; carries the attained u range.
class InfeasibleError : public std::domain_error {
 public:
  InfeasibleError(double delta, double u_min, double u_max);
  double delta;
  double u_min;  // NaN when the search interval itself is empty
  double u_max;
};

// LHS - RHS of the curve equation.
double constraint_residual(double alpha, double beta, double eps0, double eps1);

// Point on the curve for a given ratio rho = beta/alpha. Requires both
// curve factors positive, i.e. rho in (eps1/(1+eps0), (1+eps1)/eps0).
// Throws std::domain_error for an infeasible ratio.
std::pair<double, double> curve_point(double rho, double eps0, double eps1);

// u at the cut point for the curve point at rho (tau defaults to 0.5).
double u_on_curve(double rho, double eps0, double eps1, double tau = 0.5);

// Algorithm: parameterize by rho, scan a 256-point log-spaced grid over
// (eps1/(1+eps0), min(1, upper)], bracket the u = delta crossing nearest
// rho = 1, bisect to |u - delta| <= 1e-10 or width 1e-12. If u <= delta on
// the whole grid, fall back to the minimal-alpha feasible grid point.
EpBetaParams solve(const SolverRequest& req);

struct TableCell {
  double eps0;
  double eps1;
  double delta;
  std::optional<EpBetaParams> params;  // nullopt marks an infeasible cell
};

// One cell per (eps0, eps1) pair, in input order.
std::vector<TableCell> parameter_table(
    const std::vector<std::pair<double, double>>& eps_grid, double delta);

// Guideline mapping conjectured bounds [x_lower, x_upper] around observed
// [x_min, x_max] to eps0 = eps1 = (x_upper - x_lower)/(x_max - x_min) - 1.
std::pair<double, double> epsilon_from_bounds(double x_lower, double x_upper,
                                              double x_min, double x_max);

}  // namespace mixpreserve

#endif
