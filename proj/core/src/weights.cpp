#include "mixpreserve/weights.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mixpreserve/special_functions.hpp"
#include "json.hpp"

namespace mixpreserve {

namespace {

void validate(const EpBeta& p) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0))
    throw std::domain_error("EpBeta requires alpha, beta > 0");
  if (!(p.eps0 >= 0.0) || !(p.eps1 >= 0.0))
    throw std::domain_error("EpBeta requires eps0, eps1 >= 0");
}

void validate(const BetaLaw& p) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0))
    throw std::domain_error("Beta requires alpha, beta > 0");
}

void validate(const GaussPreserving& p) {
  if (!(p.mu >= 0.0 && p.mu <= 1.0))
    throw std::domain_error("GaussPreserving requires mu in [0,1]");
}

// u(tau) = E[1-W] + E[(2W-1) 1{W < tau}] specialised per law.

// For W = s*V - e0, s = 1+e0+e1, V ~ Beta(a,b):
//   E[(2W-1) 1{W<tau}] = 2 s E[V 1{V<et}] - (1+2 e0) P{V<et},
//   et = (tau+e0)/s clamped to [0,1];
//   E[V 1{V<et}] = (a/(a+b)) I_et(a+1, b).
double u_affine_beta(double a, double b, double e0, double e1, double tau) {
  const double s = 1.0 + e0 + e1;
  double et = (tau + e0) / s;
  if (et < 0.0) et = 0.0;
  if (et > 1.0) et = 1.0;
  const double mean_one_minus_w = (-e1 * a + (1.0 + e0) * b) / (a + b);
  const double i_a1 = reg_incomplete_beta(et, a + 1.0, b);
  const double i_a = reg_incomplete_beta(et, a, b);
  return mean_one_minus_w + 2.0 * s * (a / (a + b)) * i_a1 -
         (1.0 + 2.0 * e0) * i_a;
}

}  // namespace

WeightDistribution::WeightDistribution(EpBeta p) : v_(p) { validate(p); }
WeightDistribution::WeightDistribution(BetaLaw p) : v_(p) { validate(p); }
WeightDistribution::WeightDistribution(UniformLaw p) : v_(p) {}
WeightDistribution::WeightDistribution(GaussPreserving p) : v_(p) { validate(p); }

bool WeightDistribution::operator==(const WeightDistribution& other) const {
  if (v_.index() != other.v_.index()) return false;
  return std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        const auto& b = std::get<T>(other.v_);
        if constexpr (std::is_same_v<T, EpBeta>) {
          return a.alpha == b.alpha && a.beta == b.beta && a.eps0 == b.eps0 &&
                 a.eps1 == b.eps1;
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          return a.alpha == b.alpha && a.beta == b.beta;
        } else if constexpr (std::is_same_v<T, GaussPreserving>) {
          return a.mu == b.mu;
        } else {
          return true;
        }
      },
      v_);
}

double WeightDistribution::support_min() const {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EpBeta>) return -p.eps0;
        else if constexpr (std::is_same_v<T, GaussPreserving>) {
          if (p.mu == 0.0 || p.mu == 1.0) return p.mu;
          return -std::numeric_limits<double>::infinity();
        } else
          return 0.0;
      },
      v_);
}

double WeightDistribution::support_max() const {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EpBeta>) return 1.0 + p.eps1;
        else if constexpr (std::is_same_v<T, GaussPreserving>) {
          if (p.mu == 0.0 || p.mu == 1.0) return p.mu;
          return std::numeric_limits<double>::infinity();
        } else
          return 1.0;
      },
      v_);
}

std::string WeightDistribution::to_json() const {
  nlohmann::json j;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EpBeta>) {
          j = {{"kind", "epbeta"},
               {"alpha", p.alpha},
               {"beta", p.beta},
               {"eps0", p.eps0},
               {"eps1", p.eps1}};
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          j = {{"kind", "beta"}, {"alpha", p.alpha}, {"beta", p.beta}};
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
          j = {{"kind", "uniform"}};
        } else {
          j = {{"kind", "gauss_preserving"}, {"mu", p.mu}};
        }
      },
      v_);
  return j.dump();
}

WeightDistribution WeightDistribution::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid weight JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("weight JSON must be an object with a \"kind\" tag");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "epbeta") {
    return WeightDistribution(EpBeta{j.at("alpha").get<double>(),
                                     j.at("beta").get<double>(),
                                     j.at("eps0").get<double>(),
                                     j.at("eps1").get<double>()});
  }
  if (kind == "beta") {
    return WeightDistribution(
        BetaLaw{j.at("alpha").get<double>(), j.at("beta").get<double>()});
  }
  if (kind == "uniform") return WeightDistribution(UniformLaw{});
  if (kind == "gauss_preserving") {
    return WeightDistribution(GaussPreserving{j.at("mu").get<double>()});
  }
  throw std::invalid_argument("unknown weight kind \"" + kind + "\"");
}

double mean(const WeightDistribution& dist) {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EpBeta>) {
          return ((1.0 + p.eps1) * p.alpha - p.eps0 * p.beta) /
                 (p.alpha + p.beta);
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          return p.alpha / (p.alpha + p.beta);
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
          return 0.5;
        } else {
          return p.mu;
        }
      },
      dist.variant());
}

double second_moment(const WeightDistribution& dist) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EpBeta>) {
          const double s = 1.0 + p.eps0 + p.eps1;
          const double ab = p.alpha + p.beta;
          const double var = s * s * p.alpha * p.beta / (ab * ab * (ab + 1.0));
          const double m = mean(dist);
          return var + m * m;
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          const double ab = p.alpha + p.beta;
          const double var = p.alpha * p.beta / (ab * ab * (ab + 1.0));
          const double m = p.alpha / ab;
          return var + m * m;
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
          return 1.0 / 3.0;
        } else {
          // Var + mu^2 = (mu - mu^2) + mu^2 = mu
          return p.mu;
        }
      },
      dist.variant());
}

double variance_scale(const WeightDistribution& dist) {
  return 1.0 + 2.0 * (second_moment(dist) - mean(dist));
}

double covariance_scale(const WeightDistribution& dx, const WeightDistribution& dy,
                        JointScheme joint) {
  if (joint == JointScheme::kEqual) {
    if (!(dx == dy))
      throw std::invalid_argument(
          "covariance_scale: equal-weight joint requires identical laws");
    return variance_scale(dx);
  }
  const double mx = mean(dx);
  const double my = mean(dy);
  return 1.0 + 2.0 * mx * my - mx - my;
}

bool is_variance_preserving(const WeightDistribution& dist, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  return std::fabs(second_moment(dist) - mean(dist)) <= tol;
}

double u_value(const WeightDistribution& dist, double tau) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EpBeta>) {
          return u_affine_beta(p.alpha, p.beta, p.eps0, p.eps1, tau);
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          return u_affine_beta(p.alpha, p.beta, 0.0, 0.0, tau);
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
          if (tau <= 0.0 || tau >= 1.0) return 0.5;
          return 0.5 + tau * tau - tau;
        } else {
          if (p.mu == 0.0 || p.mu == 1.0) {
            // point mass at mu
            return p.mu >= tau ? 1.0 - p.mu : p.mu;
          }
          const double sigma = std::sqrt(p.mu - p.mu * p.mu);
          const double z = (tau - p.mu) / sigma;
          return (1.0 - p.mu) + (2.0 * p.mu - 1.0) * normal_cdf(z) -
                 2.0 * sigma * normal_pdf(z);
        }
      },
      dist.variant());
}

double sample(const WeightDistribution& dist, RngStream& rng) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EpBeta>) {
          return (1.0 + p.eps0 + p.eps1) * rng.beta(p.alpha, p.beta) - p.eps0;
        } else if constexpr (std::is_same_v<T, BetaLaw>) {
          return rng.beta(p.alpha, p.beta);
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
          return rng.uniform();
        } else {
          if (p.mu == 0.0 || p.mu == 1.0) return p.mu;
          return p.mu + std::sqrt(p.mu - p.mu * p.mu) * rng.normal();
        }
      },
      dist.variant());
}

}  // namespace mixpreserve
