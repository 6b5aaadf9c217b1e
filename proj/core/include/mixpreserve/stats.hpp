#ifndef MIXPRESERVE_STATS_HPP
#define MIXPRESERVE_STATS_HPP

#include <optional>
#include <string>
#include <vector>

#include "mixpreserve/dataset.hpp"

// Sample estimators of the population quantities the theory speaks about,
// theory-predicted conditional moments, relative-bias evaluation, and OLS.

namespace mixpreserve {

enum class VarianceDivisor { kSample, kPopulation };  // n-1 vs n

struct ConditionalMoments {
  std::string category;
  std::size_t count = 0;
  double mean = 0.0;
  std::optional<double> variance;  // nullopt when count is too small
};

struct CategoricalSummary {
  std::string column;
  std::vector<std::string> categories;  // first-appearance order
  std::vector<std::size_t> counts;
  std::vector<double> frequencies;
};

struct ConditionalBlock {
  std::string categorical_column;
  std::string continuous_column;
  std::vector<ConditionalMoments> per_category;
};

struct StatsReport {
  std::size_t sample_size = 0;
  std::vector<std::string> continuous_columns;
  std::vector<double> means;
  std::vector<double> variances;
  std::vector<std::vector<double>> covariance;   // symmetric, diag = variances
  std::vector<std::vector<double>> correlation;  // unit diagonal
  std::vector<CategoricalSummary> categoricals;
  std::vector<ConditionalBlock> conditionals;    // one block per (cat, cont) pair

  std::size_t continuous_index(const std::string& name) const;
  const CategoricalSummary& categorical(const std::string& name) const;
  const ConditionalBlock& conditional(const std::string& cat_col,
                                      const std::string& num_col) const;
  const ConditionalMoments& conditional_moments(const std::string& cat_col,
                                                const std::string& num_col,
                                                const std::string& category) const;
  double frequency(const std::string& cat_col, const std::string& category) const;

  std::string to_json() const;
  std::string to_csv() const;  // one statistic per row
};

struct BiasEntry {
  std::string statistic;  // mean | variance | covariance | correlation |
                          // frequency | conditional_mean | conditional_variance
  std::string column_a;
  std::string column_b;   // second column for covariance/correlation
  std::string category;   // for frequency / conditional entries
  double reference = 0.0;
  double synthetic = 0.0;
  double bias = 0.0;
  bool absolute_fallback = false;  // |reference| < 1e-9: bias is the difference
};

struct BiasReport {
  std::vector<BiasEntry> entries;

  const BiasEntry& find(const std::string& statistic, const std::string& column_a,
                        const std::string& column_b = "",
                        const std::string& category = "") const;

  std::string to_json() const;
  std::string to_csv() const;
};

// Throws std::invalid_argument when data has fewer than 2 rows. Conditional
// variances for categories with fewer than 2 rows (1 row under the
// population divisor is fine) are left undefined.
StatsReport describe(const Dataset& data,
                     VarianceDivisor divisor = VarianceDivisor::kSample);

// Element-wise relative biases (synthetic - reference)/reference with an
// absolute fallback when |reference| < 1e-9. Throws on column mismatch.
BiasReport relative_bias(const StatsReport& reference, const StatsReport& synthetic);

// (1-u) E[X|L=l] + u E[X]
double predicted_conditional_mean(const StatsReport& orig, double u,
                                  const std::string& cat_col,
                                  const std::string& num_col,
                                  const std::string& category);

// the complementary-information form:
// (1 - u P{L!=l}) E[X|L=l] + u P{L!=l} E[X|L!=l]
double predicted_conditional_mean_complement(const StatsReport& orig, double u,
                                             const std::string& cat_col,
                                             const std::string& num_col,
                                             const std::string& category);

// (1-u) Var[X|l] + u Var[X] + u(1-u) (E[X|l]-E[X])^2; exact when the weight
// law is variance-preserving (caller's responsibility).
double predicted_conditional_variance(const StatsReport& orig, double u,
                                      const std::string& cat_col,
                                      const std::string& num_col,
                                      const std::string& category);

struct ConditionalGapBounds {
  double mean_gap;        // exact: |u| P{L!=l} |E[X|l] - E[X|L!=l]|
  double var_gap_bound;   // |u| |Var[X|l]-Var[X]| + |u(1-u)| (E[X|l]-E[X])^2
};

ConditionalGapBounds conditional_gap_bounds(const StatsReport& orig, double u,
                                            const std::string& cat_col,
                                            const std::string& num_col,
                                            const std::string& category);

struct OlsFit {
  std::vector<double> coefficients;  // intercept first when requested
  std::vector<double> std_errors;
  std::vector<std::pair<double, double>> confidence_intervals;  // 95%, t-based
  double residual_variance = 0.0;
  std::size_t observations = 0;
};

// Least squares via Householder QR; classical homoskedastic standard errors.
// Throws std::invalid_argument when rows < columns + 1 or the design is
// rank-deficient (message carries the R-diagonal ratio).
OlsFit ols_fit(const std::vector<std::vector<double>>& design_rows,
               const std::vector<double>& target, bool intercept);

// Student-t upper quantile used for the intervals, exposed for tests.
double student_t_quantile(double p, double dof);

}  // namespace mixpreserve

#endif
