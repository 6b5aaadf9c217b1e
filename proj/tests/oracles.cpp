#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace mixpreserve::testing {

namespace {

double simpson_rule(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa,
                     double b, double fb, double m, double fm, double whole,
                     double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_rule(a, fa, m, fm, flm);
  const double right = simpson_rule(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson_rule(a, fa, b, fb, fm);
  const double scale = std::max({std::fabs(whole), std::fabs(b - a) * std::fabs(fm), 1e-300});
  return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol * scale, 48);
}

namespace {

// adaptive pass with the tolerance anchored to a coarse composite estimate,
// so sharp interior peaks cannot fool the refinement into stopping early
double quad_with_coarse_scale(const std::function<double(double)>& f, double a,
                              double b, double tol) {
  const int panels = 4096;
  const double h = (b - a) / panels;
  double coarse = 0.5 * (f(a) + f(b));
  for (int i = 1; i < panels; ++i) coarse += f(a + i * h);
  coarse *= h;
  const double scale = std::max(std::fabs(coarse), 1e-280);
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson_rule(a, fa, b, fb, fm);
  return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol * scale, 42);
}

// integral of t^(a-1) (1-t)^(b-1) g(t) over [0, c]. For a < 1 the
// substitution t = c u^(1/a) removes the endpoint singularity; for a >= 1
// the integrand is bounded and is taken in t directly.
double beta_kernel_left(double c, double a, double b,
                        const std::function<double(double)>& g, double tol) {
  if (c <= 0.0) return 0.0;
  if (a >= 1.0) {
    const auto f = [&](double t) {
      if (t <= 0.0) return a > 1.0 ? 0.0 : g(0.0) * std::pow(1.0 - t, b - 1.0);
      return std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0) * g(t);
    };
    return quad_with_coarse_scale(f, 0.0, c, tol);
  }
  const double ca = std::pow(c, a);
  const auto f = [&](double u) {
    const double t = c * std::pow(u, 1.0 / a);
    return std::pow(1.0 - t, b - 1.0) * g(t);
  };
  return (ca / a) * quad_with_coarse_scale(f, 0.0, 1.0, tol);
}

// integral of t^(a-1) (1-t)^(b-1) g(t) over [c, 1]; mirrored
double beta_kernel_right(double c, double a, double b,
                         const std::function<double(double)>& g, double tol) {
  if (c >= 1.0) return 0.0;
  return beta_kernel_left(1.0 - c, b, a, [&](double s) { return g(1.0 - s); }, tol);
}

double complete_beta_quad(double a, double b, double tol) {
  const auto one = [](double) { return 1.0; };
  return beta_kernel_left(0.5, a, b, one, tol) + beta_kernel_right(0.5, a, b, one, tol);
}

}  // namespace

double incomplete_beta_quad(double x, double a, double b) {
  constexpr double kTol = 1e-12;
  const auto one = [](double) { return 1.0; };
  if (x <= 0.5) return beta_kernel_left(x, a, b, one, kTol);
  return complete_beta_quad(a, b, kTol) - beta_kernel_right(x, a, b, one, kTol);
}

double reg_incomplete_beta_quad(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return incomplete_beta_quad(x, a, b) / complete_beta_quad(a, b, 1e-12);
}

namespace {

// E[g(W)] for the beta-backed laws, splitting at the indicator kink
double expect_affine_beta(double alpha, double beta, double e0, double e1,
                          const std::function<double(double)>& g) {
  constexpr double kTol = 1e-12;
  const double s = 1.0 + e0 + e1;
  const auto gw = [&](double v) { return g(s * v - e0); };
  const double norm = complete_beta_quad(alpha, beta, kTol);
  // integrate [0, 1/2] and [1/2, 1] so both endpoint singularities are handled
  return (beta_kernel_left(0.5, alpha, beta, gw, kTol) +
          beta_kernel_right(0.5, alpha, beta, gw, kTol)) /
         norm;
}

double expect_split_affine_beta(double alpha, double beta, double e0, double e1,
                                double split_v,
                                const std::function<double(double)>& g) {
  constexpr double kTol = 1e-12;
  const double s = 1.0 + e0 + e1;
  const auto gw = [&](double v) { return g(s * v - e0); };
  const double norm = complete_beta_quad(alpha, beta, kTol);
  if (split_v <= 0.0 || split_v >= 1.0) {
    return expect_affine_beta(alpha, beta, e0, e1, g);
  }
  return (beta_kernel_left(split_v, alpha, beta, gw, kTol) +
          beta_kernel_right(split_v, alpha, beta, gw, kTol)) /
         norm;
}

}  // namespace

double u_quad(const WeightDistribution& dist, double tau) {
  const auto integrand = [tau](double w) {
    return w >= tau ? 1.0 - w : w;
  };
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EpBeta>) {
          const double split = (tau + p.eps0) / (1.0 + p.eps0 + p.eps1);
          return expect_split_affine_beta(p.alpha, p.beta, p.eps0, p.eps1, split,
                                          integrand);
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          return expect_split_affine_beta(p.alpha, p.beta, 0.0, 0.0, tau, integrand);
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
          const double split = std::min(1.0, std::max(0.0, tau));
          return adaptive_simpson(integrand, 0.0, split, 1e-13) +
                 adaptive_simpson(integrand, split, 1.0, 1e-13);
        } else {
          if (p.mu == 0.0 || p.mu == 1.0)
            return p.mu >= tau ? 1.0 - p.mu : p.mu;
          const double sigma = std::sqrt(p.mu - p.mu * p.mu);
          const auto f = [&](double w) {
            const double z = (w - p.mu) / sigma;
            return integrand(w) * std::exp(-0.5 * z * z) /
                   (sigma * std::sqrt(2.0 * M_PI));
          };
          const double lo = p.mu - 12.0 * sigma;
          const double hi = p.mu + 12.0 * sigma;
          const double split = std::min(hi, std::max(lo, tau));
          return adaptive_simpson(f, lo, split, 1e-13) +
                 adaptive_simpson(f, split, hi, 1e-13);
        }
      },
      dist.variant());
}

namespace {

double moment_quad(const WeightDistribution& dist, int order) {
  const auto g = [order](double w) { return order == 1 ? w : w * w; };
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EpBeta>) {
          return expect_affine_beta(p.alpha, p.beta, p.eps0, p.eps1, g);
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          return expect_affine_beta(p.alpha, p.beta, 0.0, 0.0, g);
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
          return adaptive_simpson(g, 0.0, 1.0, 1e-13);
        } else {
          if (p.mu == 0.0 || p.mu == 1.0) return g(p.mu);
          const double sigma = std::sqrt(p.mu - p.mu * p.mu);
          const auto f = [&](double w) {
            const double z = (w - p.mu) / sigma;
            return g(w) * std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
          };
          return adaptive_simpson(f, p.mu - 12.0 * sigma, p.mu + 12.0 * sigma, 1e-13);
        }
      },
      dist.variant());
}

}  // namespace

double mean_quad(const WeightDistribution& dist) { return moment_quad(dist, 1); }
double second_moment_quad(const WeightDistribution& dist) {
  return moment_quad(dist, 2);
}

double AtomLaw::u(double tau) const {
  double s = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k)
    s += probs[k] * (atoms[k] >= tau ? 1.0 - atoms[k] : atoms[k]);
  return s;
}

double AtomLaw::mean() const {
  double s = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) s += probs[k] * atoms[k];
  return s;
}

double AtomLaw::second_moment() const {
  double s = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) s += probs[k] * atoms[k] * atoms[k];
  return s;
}

AtomLaw random_preserving_atoms(RngStream& rng, int inside, int outside) {
  AtomLaw law;
  double a_in = 0.0, a_out = 0.0;
  std::vector<double> raw;
  for (int k = 0; k < inside; ++k) {
    const double w = 0.05 + 0.9 * rng.uniform();  // w^2 - w < 0
    const double q = 0.1 + rng.uniform();
    law.atoms.push_back(w);
    raw.push_back(q);
    a_in += q * (w - w * w);
  }
  for (int k = 0; k < outside; ++k) {
    // outside [0,1] on either side: w^2 - w > 0
    const double w = rng.uniform() < 0.5 ? -0.05 - 0.6 * rng.uniform()
                                         : 1.05 + 0.6 * rng.uniform();
    const double q = 0.1 + rng.uniform();
    law.atoms.push_back(w);
    raw.push_back(q);
    a_out += q * (w * w - w);
  }
  // weight the two groups so that E[W^2 - W] = 0
  double total = 0.0;
  law.probs.resize(law.atoms.size());
  for (int k = 0; k < inside; ++k) total += (law.probs[k] = raw[k] * a_out);
  for (int k = inside; k < inside + outside; ++k)
    total += (law.probs[k] = raw[k] * a_in);
  for (auto& p : law.probs) p /= total;
  return law;
}

AtomLaw random_atoms(RngStream& rng, int count, double lo, double hi) {
  AtomLaw law;
  double total = 0.0;
  for (int k = 0; k < count; ++k) {
    law.atoms.push_back(lo + (hi - lo) * rng.uniform());
    const double q = 0.1 + rng.uniform();
    law.probs.push_back(q);
    total += q;
  }
  for (auto& p : law.probs) p /= total;
  return law;
}

EnumeratedConditional enumerate_conditional(const std::vector<double>& x,
                                            const std::vector<std::uint32_t>& labels,
                                            const AtomLaw& law, double tau,
                                            std::uint32_t category) {
  const std::size_t n = x.size();
  if (labels.size() != n) throw std::invalid_argument("x/labels size mismatch");
  double p_label = 0.0, m1 = 0.0, m2 = 0.0;
  const double pair_p = 1.0 / static_cast<double>(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < law.atoms.size(); ++k) {
        const double w = law.atoms[k];
        const std::uint32_t lbl = w >= tau ? labels[i] : labels[j];
        if (lbl != category) continue;
        const double prob = pair_p * law.probs[k];
        const double value = w * x[i] + (1.0 - w) * x[j];
        p_label += prob;
        m1 += prob * value;
        m2 += prob * value * value;
      }
    }
  }
  EnumeratedConditional out;
  out.label_probability = p_label;
  out.conditional_mean = p_label > 0.0 ? m1 / p_label : 0.0;
  out.conditional_variance =
      p_label > 0.0 ? m2 / p_label - out.conditional_mean * out.conditional_mean : 0.0;
  return out;
}

std::vector<double> normal_equations_fit(
    const std::vector<std::vector<double>>& design_rows,
    const std::vector<double>& target, bool intercept) {
  const std::size_t n = design_rows.size();
  const std::size_t k = n ? design_rows[0].size() : 0;
  const std::size_t p = k + (intercept ? 1 : 0);
  auto cell = [&](std::size_t r, std::size_t c) -> double {
    if (intercept) return c == 0 ? 1.0 : design_rows[r][c - 1];
    return design_rows[r][c];
  };
  // form X'X and X'y
  std::vector<std::vector<double>> m(p, std::vector<double>(p + 1, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) m[i][j] += cell(r, i) * cell(r, j);
      m[i][p] += cell(r, i) * target[r];
    }
  }
  // partial-pivot elimination
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < p; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    std::swap(m[c], m[piv]);
    if (m[c][c] == 0.0) throw std::invalid_argument("singular normal equations");
    for (std::size_t r = 0; r < p; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (std::size_t j = c; j <= p; ++j) m[r][j] -= f * m[c][j];
    }
  }
  std::vector<double> beta(p);
  for (std::size_t c = 0; c < p; ++c) beta[c] = m[c][p] / m[c][c];
  return beta;
}

}  // namespace mixpreserve::testing
