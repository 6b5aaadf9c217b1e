#include "mixpreserve/harness.hpp"

#include <charconv>
#include <cmath>

#include "json.hpp"

namespace mixpreserve {

namespace {

// stream tags keeping data generation, per-law synthesis, and the mixup
// engine's own streams apart
constexpr std::uint64_t kDataTag = 0xDA7AULL << 40;
constexpr std::uint64_t kSynthSeedSalt = 0x5E17ULL;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return mix64(seed ^ (salt * 0x9E3779B97F4A7C15ULL));
}

// FNV-1a over the law's tagged JSON; keys each law's synthesis stream apart
// so paired-seed comparisons across laws share only the original sample
std::uint64_t law_salt(const WeightDistribution& w) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const unsigned char ch : w.to_json()) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

Dataset quadratic_sample(std::size_t n, std::uint64_t seed) {
  Schema schema({{"x", ColumnKind::kContinuous}, {"y", ColumnKind::kContinuous}});
  Dataset data(schema);
  data.reserve(n);
  RngStream rng(seed, kDataTag);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = 5.0 + rng.normal();
    const double y = x * x + rng.normal();
    data.append_row({x, y});
  }
  return data;
}

double quadratic_coefficient(const Dataset& data, OlsFit* fit_out = nullptr) {
  std::vector<std::vector<double>> design(data.row_count());
  for (std::size_t r = 0; r < data.row_count(); ++r) {
    const double x = data.cell(r, 0);
    design[r] = {x * x};
  }
  OlsFit fit = ols_fit(design, data.column(1), /*intercept=*/false);
  if (fit_out) *fit_out = fit;
  return fit.coefficients[0];
}

}  // namespace

InferenceResult quadratic_experiment(std::size_t n, const WeightDistribution& weight,
                                     std::uint64_t seed) {
  if (n < 100) throw std::invalid_argument("quadratic_experiment needs n >= 100");
  const Dataset original = quadratic_sample(n, seed);
  const double reference = quadratic_coefficient(original);

  MixupConfig cfg;
  cfg.scheme = StandardScheme{weight};
  cfg.m = n;
  cfg.seed = derive_seed(seed, kSynthSeedSalt ^ law_salt(weight));
  const Dataset synthetic = synthesize(original, cfg);

  OlsFit fit;
  const double estimate = quadratic_coefficient(synthetic, &fit);
  InferenceResult result;
  result.estimate = estimate;
  result.ci_low = fit.confidence_intervals[0].first;
  result.ci_high = fit.confidence_intervals[0].second;
  result.reference = reference;
  result.reference_in_ci = result.ci_low <= reference && reference <= result.ci_high;
  return result;
}

Dataset gaussian_demo_sample(std::size_t n, std::uint64_t seed) {
  // covariance [[1.1, 0.9], [0.9, 1.1]] via its Cholesky factor
  const double l11 = std::sqrt(1.1);
  const double l21 = 0.9 / l11;
  const double l22 = std::sqrt(1.1 - 0.9 * 0.9 / 1.1);
  Schema schema({{"x", ColumnKind::kContinuous}, {"y", ColumnKind::kContinuous}});
  Dataset data(schema);
  data.reserve(n);
  RngStream rng(seed, kDataTag);
  for (std::size_t i = 0; i < n; ++i) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    data.append_row({l11 * z1, l21 * z1 + l22 * z2});
  }
  return data;
}

BiasReport gaussian_demo(std::size_t n, std::size_t m,
                         const WeightDistribution& weight, std::uint64_t seed) {
  if (n < 100) throw std::invalid_argument("gaussian_demo needs n >= 100");
  const Dataset original = gaussian_demo_sample(n, seed);
  MixupConfig cfg;
  cfg.scheme = StandardScheme{weight};
  cfg.m = m;
  cfg.seed = derive_seed(seed, kSynthSeedSalt ^ law_salt(weight));
  const Dataset synthetic = synthesize(original, cfg);
  return relative_bias(describe(original), describe(synthetic));
}

DriftTrace drift_study(const Dataset& data, const MixupConfig& cfg,
                       std::size_t generations, std::uint64_t seed) {
  if (generations < 1) throw std::invalid_argument("drift_study needs generations >= 1");

  const Schema& schema = data.schema();
  const auto cont = schema.continuous_indices();
  std::vector<double> scales(cont.size());
  if (const auto* standard = std::get_if<StandardScheme>(&cfg.scheme)) {
    std::fill(scales.begin(), scales.end(), variance_scale(standard->weight));
  } else {
    const auto& general = std::get<GeneralScheme>(cfg.scheme);
    for (std::size_t i = 0; i < cont.size(); ++i)
      scales[i] = variance_scale(general.per_column.at(schema.at(cont[i]).name));
  }

  DriftTrace trace;
  const auto record = [&](const Dataset& d, std::size_t g) {
    const StatsReport rep = describe(d);
    if (g == 0) trace.continuous_columns = rep.continuous_columns;
    DriftGeneration gen;
    gen.generation = g;
    gen.rows = d.row_count();
    gen.variances = rep.variances;
    gen.covariance = rep.covariance;
    gen.frequencies = rep.categoricals;
    gen.conditional_means = rep.conditionals;
    gen.predicted_scales.resize(cont.size());
    for (std::size_t i = 0; i < cont.size(); ++i)
      gen.predicted_scales[i] = std::pow(scales[i], static_cast<double>(g));
    trace.generations.push_back(std::move(gen));
  };

  record(data, 0);
  MixupConfig base = cfg;
  base.seed = seed;
  Dataset current = data.like();  // placeholder until generation 1
  const Dataset* parent = &data;
  for (std::size_t g = 1; g <= generations; ++g) {
    MixupConfig gen_cfg = base;
    gen_cfg.seed = base.seed ^ g;
    current = synthesize(*parent, gen_cfg);
    parent = &current;
    record(current, g);
  }
  return trace;
}

std::string DriftTrace::to_json() const {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : generations) {
    nlohmann::json freqs = nlohmann::json::array();
    for (const auto& c : g.frequencies) {
      freqs.push_back({{"column", c.column},
                       {"categories", c.categories},
                       {"frequencies", c.frequencies}});
    }
    nlohmann::json conds = nlohmann::json::array();
    for (const auto& b : g.conditional_means) {
      nlohmann::json per_cat = nlohmann::json::array();
      for (const auto& m : b.per_category)
        per_cat.push_back({{"category", m.category}, {"mean", m.mean}});
      conds.push_back({{"categorical_column", b.categorical_column},
                       {"continuous_column", b.continuous_column},
                       {"per_category", per_cat}});
    }
    gens.push_back({{"generation", g.generation},
                    {"rows", g.rows},
                    {"variances", g.variances},
                    {"covariance", g.covariance},
                    {"frequencies", freqs},
                    {"conditional_means", conds},
                    {"predicted_scales", g.predicted_scales}});
  }
  return nlohmann::json{{"continuous_columns", continuous_columns},
                        {"generations", gens}}
      .dump(2);
}

std::string DriftTrace::to_csv() const {
  std::string out = "generation,kind,column_a,column_b,category,value,predicted\n";
  char buf[64];
  const auto num = [&buf](double v) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  };
  for (const auto& g : generations) {
    const std::string gen = std::to_string(g.generation);
    for (std::size_t i = 0; i < continuous_columns.size(); ++i) {
      out += gen + ",variance," + continuous_columns[i] + ",,," +
             num(g.variances[i]) + "," + num(g.predicted_scales[i]) + "\n";
      for (std::size_t j = i + 1; j < continuous_columns.size(); ++j)
        out += gen + ",covariance," + continuous_columns[i] + "," +
               continuous_columns[j] + ",," + num(g.covariance[i][j]) + ",\n";
    }
    for (const auto& c : g.frequencies)
      for (std::size_t k = 0; k < c.categories.size(); ++k)
        out += gen + ",frequency," + c.column + ",," + c.categories[k] + "," +
               num(c.frequencies[k]) + ",\n";
    for (const auto& b : g.conditional_means)
      for (const auto& m : b.per_category)
        out += gen + ",conditional_mean," + b.continuous_column + "," +
               b.categorical_column + "," + m.category + "," + num(m.mean) + ",\n";
  }
  return out;
}

}  // namespace mixpreserve
