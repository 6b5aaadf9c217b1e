#ifndef MIXPRESERVE_HARNESS_HPP
#define MIXPRESERVE_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mixpreserve/stats.hpp"
#include "mixpreserve/synthesis.hpp"
#include "mixpreserve/weights.hpp"

// Desk-scale experiment reproductions: the quadratic-inference study, the
// bivariate-Gaussian preservation demo, and the repeated-resynthesis drift
// study. All runs are deterministic given (seed, config).

namespace mixpreserve {

struct InferenceResult {
  double estimate = 0.0;   // coefficient fitted on the synthetic sample
  double ci_low = 0.0;     // 95% interval
  double ci_high = 0.0;
  double reference = 0.0;  // coefficient fitted on the original sample
  bool reference_in_ci = false;
};

// Draw n rows of (X, Y) with X ~ N(5,1), Y ~ N(X^2,1); fit Y = b X^2 + e on
// the original sample and on m = n standard-scheme synthetic rows.
InferenceResult quadratic_experiment(std::size_t n, const WeightDistribution& weight,
                                     std::uint64_t seed);

// n points from the centered Gaussian with covariance [[1.1, .9],[.9, 1.1]],
// synthesized to m rows under the standard scheme; moments compared.
BiasReport gaussian_demo(std::size_t n, std::size_t m,
                         const WeightDistribution& weight, std::uint64_t seed);

// original sample used by gaussian_demo, exposed for the CLI
Dataset gaussian_demo_sample(std::size_t n, std::uint64_t seed);

struct DriftGeneration {
  std::size_t generation = 0;  // 0 = the original data
  std::size_t rows = 0;
  std::vector<double> variances;                  // per continuous column
  std::vector<std::vector<double>> covariance;
  std::vector<CategoricalSummary> frequencies;
  std::vector<ConditionalBlock> conditional_means;
  // variance_scale(weight for that column)^g, aligned with the continuous
  // columns; identical entries under the standard scheme
  std::vector<double> predicted_scales;
};

struct DriftTrace {
  std::vector<std::string> continuous_columns;
  std::vector<DriftGeneration> generations;  // index 0 is the original

  std::string to_json() const;
  // tidy CSV: one row per generation x statistic
  std::string to_csv() const;
};

// Resynthesis chain of `generations` steps starting from `data`; the trace
// holds generation 0 (the original describe) plus one entry per step and the
// analytic variance_scale^g overlay.
DriftTrace drift_study(const Dataset& data, const MixupConfig& cfg,
                       std::size_t generations, std::uint64_t seed);

}  // namespace mixpreserve

#endif
