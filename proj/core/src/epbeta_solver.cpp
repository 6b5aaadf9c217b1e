#include "mixpreserve/epbeta_solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace mixpreserve {

namespace {

constexpr int kGridSize = 256;
constexpr double kUTol = 1e-10;
constexpr double kRhoTol = 1e-12;

double rho_lower(double eps0, double eps1) { return eps1 / (1.0 + eps0); }

double rho_upper_factor(double eps0, double eps1) {
  if (eps0 == 0.0) return std::numeric_limits<double>::infinity();
  return (1.0 + eps1) / eps0;
}

}  // namespace

InfeasibleError::InfeasibleError(double delta_, double u_min_, double u_max_)
    : std::domain_error([&] {
        std::ostringstream os;
        os << "no curve point attains u <= " << delta_;
        if (std::isnan(u_min_)) {
          os << " (empty search interval: alpha >= beta excludes all feasible ratios)";
        } else {
          os << " (attained u range [" << u_min_ << ", " << u_max_ << "])";
        }
        return os.str();
      }()),
      delta(delta_),
      u_min(u_min_),
      u_max(u_max_) {}

double constraint_residual(double alpha, double beta, double eps0, double eps1) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::domain_error("constraint_residual: alpha, beta must be positive");
  const double f1 = 1.0 + eps1 - eps0 * (beta / alpha);
  const double f2 = 1.0 + eps0 - eps1 * (alpha / beta);
  const double s = 1.0 + eps0 + eps1;
  return f1 * f2 * (1.0 + alpha + beta) - s * s;
}

std::pair<double, double> curve_point(double rho, double eps0, double eps1) {
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw std::domain_error("curve_point: rho must be positive and finite");
  const double f1 = 1.0 + eps1 - eps0 * rho;
  const double f2 = 1.0 + eps0 - eps1 / rho;
  if (!(f1 > 0.0) || !(f2 > 0.0)) {
    std::ostringstream os;
    os << "curve_point: rho = " << rho << " outside the feasible interval ("
       << rho_lower(eps0, eps1) << ", " << rho_upper_factor(eps0, eps1) << ")";
    throw std::domain_error(os.str());
  }
  const double s = 1.0 + eps0 + eps1;
  const double sum = s * s / (f1 * f2) - 1.0;
  if (!(sum > 0.0)) {
    // reachable only at eps0 = eps1 = 0 where the curve degenerates
    throw std::domain_error("curve_point: nonpositive alpha + beta on the curve");
  }
  const double alpha = sum / (1.0 + rho);
  return {alpha, rho * alpha};
}

double u_on_curve(double rho, double eps0, double eps1, double tau) {
  const auto [alpha, beta] = curve_point(rho, eps0, eps1);
  return u_value(WeightDistribution(EpBeta{alpha, beta, eps0, eps1}), tau);
}

EpBetaParams solve(const SolverRequest& req) {
  if (!(req.eps0 >= 0.0) || !(req.eps1 >= 0.0) || !std::isfinite(req.eps0) ||
      !std::isfinite(req.eps1))
    throw std::domain_error("solve: eps0, eps1 must be nonnegative and finite");
  if (!(req.delta >= 0.0 && req.delta <= 1.0))
    throw std::domain_error("solve: delta must lie in [0, 1]");
  if (req.eps0 + req.eps1 == 0.0) throw NoPreservingParamsError();

  const double lo = rho_lower(req.eps0, req.eps1);
  const double hi = std::min(1.0, std::nextafter(rho_upper_factor(req.eps0, req.eps1), 0.0));
  if (!(lo < hi)) {
    throw InfeasibleError(req.delta, std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::quiet_NaN());
  }

  // log-spaced offsets from the singular lower boundary, densest where the
  // curve sum diverges
  std::vector<double> rhos(kGridSize);
  std::vector<double> us(kGridSize);
  for (int i = 0; i < kGridSize; ++i) {
    const double t = -9.0 * (1.0 - static_cast<double>(i) / (kGridSize - 1));
    rhos[i] = lo + (hi - lo) * std::pow(10.0, t);
    us[i] = u_on_curve(rhos[i], req.eps0, req.eps1, req.tau);
  }

  const auto make_params = [&](double alpha, double beta) {
    return EpBetaParams{
        alpha, beta, req.eps0, req.eps1,
        u_value(WeightDistribution(EpBeta{alpha, beta, req.eps0, req.eps1}), req.tau),
        constraint_residual(alpha, beta, req.eps0, req.eps1)};
  };

  // bracket the u = delta crossing nearest rho = 1
  for (int i = kGridSize - 1; i >= 1; --i) {
    if ((us[i] - req.delta) * (us[i - 1] - req.delta) > 0.0) continue;
    double a = rhos[i - 1], b = rhos[i];
    double ua = us[i - 1];
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      const double um = u_on_curve(m, req.eps0, req.eps1, req.tau);
      if (std::fabs(um - req.delta) <= kUTol || (b - a) <= kRhoTol) {
        a = b = m;
        break;
      }
      if ((ua - req.delta) * (um - req.delta) <= 0.0) {
        b = m;
      } else {
        a = m;
        ua = um;
      }
    }
    double root = 0.5 * (a + b);
    // land on the feasible side of delta
    if (u_on_curve(root, req.eps0, req.eps1, req.tau) > req.delta + kUTol) root = a;
    const auto [alpha, beta] = curve_point(root, req.eps0, req.eps1);
    return make_params(alpha, beta);
  }

  // no crossing: either everything is feasible (pick minimal alpha on the
  // grid) or nothing is
  double u_min = us[0], u_max = us[0];
  int best = -1;
  double best_alpha = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGridSize; ++i) {
    u_min = std::min(u_min, us[i]);
    u_max = std::max(u_max, us[i]);
    if (us[i] <= req.delta) {
      const double alpha = curve_point(rhos[i], req.eps0, req.eps1).first;
      if (alpha < best_alpha) {
        best_alpha = alpha;
        best = i;
      }
    }
  }
  if (best < 0) throw InfeasibleError(req.delta, u_min, u_max);
  const auto [alpha, beta] = curve_point(rhos[best], req.eps0, req.eps1);
  return make_params(alpha, beta);
}

std::vector<TableCell> parameter_table(
    const std::vector<std::pair<double, double>>& eps_grid, double delta) {
  std::vector<TableCell> cells;
  cells.reserve(eps_grid.size());
  for (const auto& [e0, e1] : eps_grid) {
    TableCell cell{e0, e1, delta, std::nullopt};
    try {
      cell.params = solve(SolverRequest{e0, e1, delta, 0.5});
    } catch (const std::domain_error&) {
      // infeasible cells stay unmarked
    }
    cells.push_back(cell);
  }
  return cells;
}

std::pair<double, double> epsilon_from_bounds(double x_lower, double x_upper,
                                              double x_min, double x_max) {
  if (x_min == x_max)
    throw std::domain_error("epsilon_from_bounds: degenerate observed range");
  if (!(x_lower <= x_min && x_min < x_max && x_max <= x_upper))
    throw std::domain_error(
        "epsilon_from_bounds: need x_lower <= x_min < x_max <= x_upper");
  const double eps = (x_upper - x_lower) / (x_max - x_min) - 1.0;
  return {eps, eps};
}

}  // namespace mixpreserve
