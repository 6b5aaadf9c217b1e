#include "mixpreserve/stats.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mixpreserve/special_functions.hpp"
#include "json.hpp"

namespace mixpreserve {

namespace {

constexpr double kZeroReference = 1e-9;

double bias_of(double reference, double synthetic, bool& fallback) {
  fallback = std::fabs(reference) < kZeroReference;
  return fallback ? synthetic - reference : (synthetic - reference) / reference;
}

// E[X | L != l] recovered from the law of total expectation
double complement_mean(double overall_mean, double cond_mean, double freq) {
  if (freq >= 1.0) return cond_mean;  // P{L != l} = 0; value is never used alone
  return (overall_mean - freq * cond_mean) / (1.0 - freq);
}

}  // namespace

std::size_t StatsReport::continuous_index(const std::string& name) const {
  for (std::size_t i = 0; i < continuous_columns.size(); ++i)
    if (continuous_columns[i] == name) return i;
  throw std::invalid_argument("unknown continuous column \"" + name + "\"");
}

const CategoricalSummary& StatsReport::categorical(const std::string& name) const {
  for (const auto& c : categoricals)
    if (c.column == name) return c;
  throw std::invalid_argument("unknown categorical column \"" + name + "\"");
}

const ConditionalBlock& StatsReport::conditional(const std::string& cat_col,
                                                 const std::string& num_col) const {
  for (const auto& b : conditionals)
    if (b.categorical_column == cat_col && b.continuous_column == num_col) return b;
  throw std::invalid_argument("no conditional block for (" + cat_col + ", " +
                              num_col + ")");
}

const ConditionalMoments& StatsReport::conditional_moments(
    const std::string& cat_col, const std::string& num_col,
    const std::string& category) const {
  for (const auto& m : conditional(cat_col, num_col).per_category)
    if (m.category == category) return m;
  throw std::invalid_argument("unknown category \"" + category + "\" in column \"" +
                              cat_col + "\"");
}

double StatsReport::frequency(const std::string& cat_col,
                              const std::string& category) const {
  const auto& c = categorical(cat_col);
  for (std::size_t i = 0; i < c.categories.size(); ++i)
    if (c.categories[i] == category) return c.frequencies[i];
  throw std::invalid_argument("unknown category \"" + category + "\" in column \"" +
                              cat_col + "\"");
}

StatsReport describe(const Dataset& data, VarianceDivisor divisor) {
  const std::size_t n = data.row_count();
  if (n < 2) throw std::invalid_argument("describe needs at least 2 rows");
  const Schema& schema = data.schema();
  const auto cont = schema.continuous_indices();
  const auto cats = schema.categorical_indices();
  const double denom =
      divisor == VarianceDivisor::kSample ? static_cast<double>(n - 1)
                                          : static_cast<double>(n);

  StatsReport rep;
  rep.sample_size = n;
  for (const std::size_t c : cont) rep.continuous_columns.push_back(schema.at(c).name);

  rep.means.resize(cont.size());
  for (std::size_t a = 0; a < cont.size(); ++a) {
    const auto& col = data.column(cont[a]);
    double s = 0.0;
    for (const double v : col) s += v;
    rep.means[a] = s / static_cast<double>(n);
  }

  rep.covariance.assign(cont.size(), std::vector<double>(cont.size(), 0.0));
  for (std::size_t a = 0; a < cont.size(); ++a) {
    for (std::size_t b = a; b < cont.size(); ++b) {
      const auto& ca = data.column(cont[a]);
      const auto& cb = data.column(cont[b]);
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r)
        s += (ca[r] - rep.means[a]) * (cb[r] - rep.means[b]);
      rep.covariance[a][b] = rep.covariance[b][a] = s / denom;
    }
  }
  rep.variances.resize(cont.size());
  for (std::size_t a = 0; a < cont.size(); ++a) rep.variances[a] = rep.covariance[a][a];

  rep.correlation.assign(cont.size(), std::vector<double>(cont.size(), 0.0));
  for (std::size_t a = 0; a < cont.size(); ++a) {
    for (std::size_t b = 0; b < cont.size(); ++b) {
      const double d = std::sqrt(rep.variances[a] * rep.variances[b]);
      rep.correlation[a][b] = d > 0.0 ? rep.covariance[a][b] / d : (a == b ? 1.0 : 0.0);
    }
  }

  for (const std::size_t c : cats) {
    const auto& dict = data.dict(c);
    CategoricalSummary summary;
    summary.column = schema.at(c).name;
    summary.categories = dict.labels();
    summary.counts.assign(dict.size(), 0);
    for (std::size_t r = 0; r < n; ++r) ++summary.counts[data.category_id(r, c)];
    summary.frequencies.resize(dict.size());
    for (std::size_t i = 0; i < dict.size(); ++i)
      summary.frequencies[i] =
          static_cast<double>(summary.counts[i]) / static_cast<double>(n);
    rep.categoricals.push_back(std::move(summary));
  }

  for (const std::size_t cc : cats) {
    const auto& dict = data.dict(cc);
    for (const std::size_t xc : cont) {
      ConditionalBlock block;
      block.categorical_column = schema.at(cc).name;
      block.continuous_column = schema.at(xc).name;
      std::vector<double> sum(dict.size(), 0.0);
      std::vector<std::size_t> count(dict.size(), 0);
      for (std::size_t r = 0; r < n; ++r) {
        const auto id = data.category_id(r, cc);
        sum[id] += data.cell(r, xc);
        ++count[id];
      }
      std::vector<double> sq(dict.size(), 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        const auto id = data.category_id(r, cc);
        const double d = data.cell(r, xc) - sum[id] / static_cast<double>(count[id]);
        sq[id] += d * d;
      }
      for (std::uint32_t id = 0; id < dict.size(); ++id) {
        if (count[id] == 0) continue;  // category interned but absent
        ConditionalMoments m;
        m.category = dict.label(id);
        m.count = count[id];
        m.mean = sum[id] / static_cast<double>(count[id]);
        if (divisor == VarianceDivisor::kSample) {
          if (count[id] >= 2) m.variance = sq[id] / static_cast<double>(count[id] - 1);
        } else {
          m.variance = sq[id] / static_cast<double>(count[id]);
        }
        block.per_category.push_back(std::move(m));
      }
      rep.conditionals.push_back(std::move(block));
    }
  }
  return rep;
}

BiasReport relative_bias(const StatsReport& reference, const StatsReport& synthetic) {
  if (reference.continuous_columns != synthetic.continuous_columns)
    throw std::invalid_argument("relative_bias: continuous columns differ");
  if (reference.categoricals.size() != synthetic.categoricals.size())
    throw std::invalid_argument("relative_bias: categorical columns differ");
  for (std::size_t i = 0; i < reference.categoricals.size(); ++i)
    if (reference.categoricals[i].column != synthetic.categoricals[i].column)
      throw std::invalid_argument("relative_bias: categorical columns differ");

  BiasReport out;
  const auto push = [&out](std::string stat, std::string a, std::string b,
                           std::string cat, double ref, double syn) {
    BiasEntry e;
    e.statistic = std::move(stat);
    e.column_a = std::move(a);
    e.column_b = std::move(b);
    e.category = std::move(cat);
    e.reference = ref;
    e.synthetic = syn;
    e.bias = bias_of(ref, syn, e.absolute_fallback);
    out.entries.push_back(std::move(e));
  };

  const auto& cols = reference.continuous_columns;
  for (std::size_t a = 0; a < cols.size(); ++a) {
    push("mean", cols[a], "", "", reference.means[a], synthetic.means[a]);
    push("variance", cols[a], "", "", reference.variances[a], synthetic.variances[a]);
  }
  for (std::size_t a = 0; a < cols.size(); ++a) {
    for (std::size_t b = a + 1; b < cols.size(); ++b) {
      push("covariance", cols[a], cols[b], "", reference.covariance[a][b],
           synthetic.covariance[a][b]);
      push("correlation", cols[a], cols[b], "", reference.correlation[a][b],
           synthetic.correlation[a][b]);
    }
  }
  for (const auto& ref_cat : reference.categoricals) {
    const auto& syn_cat = synthetic.categorical(ref_cat.column);
    for (std::size_t i = 0; i < ref_cat.categories.size(); ++i) {
      double syn_freq = 0.0;
      for (std::size_t j = 0; j < syn_cat.categories.size(); ++j)
        if (syn_cat.categories[j] == ref_cat.categories[i])
          syn_freq = syn_cat.frequencies[j];
      push("frequency", ref_cat.column, "", ref_cat.categories[i],
           ref_cat.frequencies[i], syn_freq);
    }
  }
  for (const auto& ref_block : reference.conditionals) {
    const ConditionalBlock* syn_block = nullptr;
    for (const auto& b : synthetic.conditionals)
      if (b.categorical_column == ref_block.categorical_column &&
          b.continuous_column == ref_block.continuous_column)
        syn_block = &b;
    if (!syn_block) continue;
    for (const auto& ref_m : ref_block.per_category) {
      for (const auto& syn_m : syn_block->per_category) {
        if (syn_m.category != ref_m.category) continue;
        push("conditional_mean", ref_block.continuous_column,
             ref_block.categorical_column, ref_m.category, ref_m.mean, syn_m.mean);
        if (ref_m.variance && syn_m.variance) {
          push("conditional_variance", ref_block.continuous_column,
               ref_block.categorical_column, ref_m.category, *ref_m.variance,
               *syn_m.variance);
        }
      }
    }
  }
  return out;
}

double predicted_conditional_mean(const StatsReport& orig, double u,
                                  const std::string& cat_col,
                                  const std::string& num_col,
                                  const std::string& category) {
  const auto& m = orig.conditional_moments(cat_col, num_col, category);
  const double overall = orig.means[orig.continuous_index(num_col)];
  return (1.0 - u) * m.mean + u * overall;
}

double predicted_conditional_mean_complement(const StatsReport& orig, double u,
                                             const std::string& cat_col,
                                             const std::string& num_col,
                                             const std::string& category) {
  const auto& m = orig.conditional_moments(cat_col, num_col, category);
  const double overall = orig.means[orig.continuous_index(num_col)];
  const double freq = orig.frequency(cat_col, category);
  const double p_neq = 1.0 - freq;
  const double other = complement_mean(overall, m.mean, freq);
  return (1.0 - u * p_neq) * m.mean + u * p_neq * other;
}

double predicted_conditional_variance(const StatsReport& orig, double u,
                                      const std::string& cat_col,
                                      const std::string& num_col,
                                      const std::string& category) {
  const auto& m = orig.conditional_moments(cat_col, num_col, category);
  if (!m.variance)
    throw std::invalid_argument("conditional variance undefined for category \"" +
                                category + "\"");
  const std::size_t xi = orig.continuous_index(num_col);
  const double gap = m.mean - orig.means[xi];
  return (1.0 - u) * *m.variance + u * orig.variances[xi] + u * (1.0 - u) * gap * gap;
}

ConditionalGapBounds conditional_gap_bounds(const StatsReport& orig, double u,
                                            const std::string& cat_col,
                                            const std::string& num_col,
                                            const std::string& category) {
  const auto& m = orig.conditional_moments(cat_col, num_col, category);
  if (!m.variance)
    throw std::invalid_argument("conditional variance undefined for category \"" +
                                category + "\"");
  const std::size_t xi = orig.continuous_index(num_col);
  const double overall_mean = orig.means[xi];
  const double freq = orig.frequency(cat_col, category);
  const double p_neq = 1.0 - freq;
  const double other = complement_mean(overall_mean, m.mean, freq);
  const double mean_gap = std::fabs(u) * p_neq * std::fabs(m.mean - other);
  const double centered = m.mean - overall_mean;
  const double var_gap = std::fabs(u) * std::fabs(*m.variance - orig.variances[xi]) +
                         std::fabs(u * (1.0 - u)) * centered * centered;
  return {mean_gap, var_gap};
}

double student_t_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile level must be in (0,1)");
  if (!(dof > 0.0)) throw std::domain_error("degrees of freedom must be positive");
  if (p == 0.5) return 0.0;
  const bool upper = p > 0.5;
  const double target = upper ? p : 1.0 - p;
  // F(t) = 1 - 0.5 I_{v/(v+t^2)}(v/2, 1/2) for t >= 0; bisect on t
  const auto cdf = [dof](double t) {
    const double x = dof / (dof + t * t);
    return 1.0 - 0.5 * reg_incomplete_beta(x, 0.5 * dof, 0.5);
  };
  double lo = 0.0, hi = 1.0;
  while (cdf(hi) < target && hi < 1e8) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-12 * (1.0 + hi)) break;
  }
  const double t = 0.5 * (lo + hi);
  return upper ? t : -t;
}

OlsFit ols_fit(const std::vector<std::vector<double>>& design_rows,
               const std::vector<double>& target, bool intercept) {
  const std::size_t n = design_rows.size();
  if (n != target.size())
    throw std::invalid_argument("ols_fit: design and target sizes differ");
  const std::size_t k = n ? design_rows[0].size() : 0;
  const std::size_t p = k + (intercept ? 1 : 0);
  if (p == 0) throw std::invalid_argument("ols_fit: empty design");
  if (n < p + 1)
    throw std::invalid_argument("ols_fit: need at least parameters + 1 rows");

  // column-major working copy of [1 | X]
  std::vector<double> a(n * p);
  for (std::size_t r = 0; r < n; ++r) {
    if (design_rows[r].size() != k)
      throw std::invalid_argument("ols_fit: ragged design matrix");
    std::size_t c = 0;
    if (intercept) a[c++ * n + r] = 1.0;
    for (std::size_t j = 0; j < k; ++j) a[(c + j) * n + r] = design_rows[r][j];
  }
  std::vector<double> y = target;

  // Householder QR, applying the reflections to y as we go
  std::vector<double> rdiag(p);
  for (std::size_t c = 0; c < p; ++c) {
    double norm = 0.0;
    for (std::size_t r = c; r < n; ++r) norm += a[c * n + r] * a[c * n + r];
    norm = std::sqrt(norm);
    if (a[c * n + c] > 0) norm = -norm;
    rdiag[c] = norm;
    if (norm == 0.0) continue;
    for (std::size_t r = c; r < n; ++r) a[c * n + r] /= norm;
    a[c * n + c] += 1.0;
    for (std::size_t j = c + 1; j < p; ++j) {
      double s = 0.0;
      for (std::size_t r = c; r < n; ++r) s += a[c * n + r] * a[j * n + r];
      s = -s / a[c * n + c];
      for (std::size_t r = c; r < n; ++r) a[j * n + r] += s * a[c * n + r];
    }
    double s = 0.0;
    for (std::size_t r = c; r < n; ++r) s += a[c * n + r] * y[r];
    s = -s / a[c * n + c];
    for (std::size_t r = c; r < n; ++r) y[r] += s * a[c * n + r];
  }

  double max_diag = 0.0, min_diag = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < p; ++c) {
    max_diag = std::max(max_diag, std::fabs(rdiag[c]));
    min_diag = std::min(min_diag, std::fabs(rdiag[c]));
  }
  if (!(min_diag > 1e-12 * max_diag)) {
    throw std::invalid_argument(
        "ols_fit: rank-deficient design (R diagonal ratio " +
        std::to_string(max_diag > 0 ? min_diag / max_diag : 0.0) + ")");
  }

  // back substitution; R's strict upper triangle lives in a, diagonal in rdiag
  std::vector<double> beta(p);
  for (std::size_t c = p; c-- > 0;) {
    double s = y[c];
    for (std::size_t j = c + 1; j < p; ++j) s -= a[j * n + c] * beta[j];
    beta[c] = s / rdiag[c];
  }

  double rss = 0.0;
  for (std::size_t r = p; r < n; ++r) rss += y[r] * y[r];
  const double sigma2 = rss / static_cast<double>(n - p);

  // diag of (X'X)^-1 = row norms of R^-T: forward-solve R^T w = e_c
  std::vector<double> se(p), diag(p);
  for (std::size_t c = 0; c < p; ++c) {
    std::vector<double> w(p, 0.0);
    for (std::size_t i = c; i < p; ++i) {
      double s = (i == c) ? 1.0 : 0.0;
      for (std::size_t j = c; j < i; ++j) s -= a[i * n + j] * w[j];
      w[i] = s / rdiag[i];
    }
    double d = 0.0;
    for (std::size_t i = c; i < p; ++i) d += w[i] * w[i];
    diag[c] = d;
    se[c] = std::sqrt(sigma2 * d);
  }

  const double tq = student_t_quantile(0.975, static_cast<double>(n - p));
  OlsFit fit;
  fit.coefficients = std::move(beta);
  fit.std_errors = std::move(se);
  fit.confidence_intervals.resize(p);
  for (std::size_t c = 0; c < p; ++c) {
    fit.confidence_intervals[c] = {fit.coefficients[c] - tq * fit.std_errors[c],
                                   fit.coefficients[c] + tq * fit.std_errors[c]};
  }
  fit.residual_variance = sigma2;
  fit.observations = n;
  return fit;
}

namespace {

nlohmann::json conditional_to_json(const ConditionalBlock& b) {
  nlohmann::json per_cat = nlohmann::json::array();
  for (const auto& m : b.per_category) {
    nlohmann::json e{{"category", m.category},
                     {"count", m.count},
                     {"mean", m.mean}};
    if (m.variance) {
      e["variance"] = *m.variance;
    } else {
      e["variance"] = nullptr;
    }
    per_cat.push_back(std::move(e));
  }
  return {{"categorical_column", b.categorical_column},
          {"continuous_column", b.continuous_column},
          {"per_category", per_cat}};
}

}  // namespace

std::string StatsReport::to_json() const {
  nlohmann::json j;
  j["sample_size"] = sample_size;
  j["continuous_columns"] = continuous_columns;
  j["means"] = means;
  j["variances"] = variances;
  j["covariance"] = covariance;
  j["correlation"] = correlation;
  nlohmann::json cats = nlohmann::json::array();
  for (const auto& c : categoricals) {
    cats.push_back({{"column", c.column},
                    {"categories", c.categories},
                    {"counts", c.counts},
                    {"frequencies", c.frequencies}});
  }
  j["categoricals"] = cats;
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& b : conditionals) conds.push_back(conditional_to_json(b));
  j["conditionals"] = conds;
  return j.dump(2);
}

std::string StatsReport::to_csv() const {
  std::string out = "kind,column_a,column_b,category,value\n";
  const auto row = [&out](const std::string& kind, const std::string& a,
                          const std::string& b, const std::string& cat, double v) {
    out += kind;
    out.push_back(',');
    out += a;
    out.push_back(',');
    out += b;
    out.push_back(',');
    out += cat;
    out.push_back(',');
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
    out.push_back('\n');
  };
  for (std::size_t i = 0; i < continuous_columns.size(); ++i) {
    row("mean", continuous_columns[i], "", "", means[i]);
    row("variance", continuous_columns[i], "", "", variances[i]);
  }
  for (std::size_t i = 0; i < continuous_columns.size(); ++i)
    for (std::size_t j = i + 1; j < continuous_columns.size(); ++j) {
      row("covariance", continuous_columns[i], continuous_columns[j], "",
          covariance[i][j]);
      row("correlation", continuous_columns[i], continuous_columns[j], "",
          correlation[i][j]);
    }
  for (const auto& c : categoricals)
    for (std::size_t i = 0; i < c.categories.size(); ++i)
      row("frequency", c.column, "", c.categories[i], c.frequencies[i]);
  for (const auto& b : conditionals)
    for (const auto& m : b.per_category) {
      row("conditional_mean", b.continuous_column, b.categorical_column, m.category,
          m.mean);
      if (m.variance)
        row("conditional_variance", b.continuous_column, b.categorical_column,
            m.category, *m.variance);
    }
  return out;
}

const BiasEntry& BiasReport::find(const std::string& statistic,
                                  const std::string& column_a,
                                  const std::string& column_b,
                                  const std::string& category) const {
  for (const auto& e : entries)
    if (e.statistic == statistic && e.column_a == column_a &&
        e.column_b == column_b && e.category == category)
      return e;
  throw std::invalid_argument("no bias entry for " + statistic + "(" + column_a +
                              ")");
}

std::string BiasReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries) {
    arr.push_back({{"statistic", e.statistic},
                   {"column_a", e.column_a},
                   {"column_b", e.column_b},
                   {"category", e.category},
                   {"reference", e.reference},
                   {"synthetic", e.synthetic},
                   {"bias", e.bias},
                   {"absolute_fallback", e.absolute_fallback}});
  }
  return nlohmann::json{{"entries", arr}}.dump(2);
}

std::string BiasReport::to_csv() const {
  std::string out =
      "statistic,column_a,column_b,category,reference,synthetic,bias,absolute_fallback\n";
  for (const auto& e : entries) {
    out += e.statistic;
    out.push_back(',');
    out += e.column_a;
    out.push_back(',');
    out += e.column_b;
    out.push_back(',');
    out += e.category;
    char buf[64];
    for (const double v : {e.reference, e.synthetic, e.bias}) {
      out.push_back(',');
      const auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out.append(buf, res.ptr);
    }
    out.push_back(',');
    out += e.absolute_fallback ? "true" : "false";
    out.push_back('\n');
  }
  return out;
}

}  // namespace mixpreserve
