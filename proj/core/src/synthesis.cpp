#include "mixpreserve/synthesis.hpp"

#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace mixpreserve {

namespace {

// Row streams and pair streams are separated in key space so that the pair
// of a row and its weights never collide.
constexpr std::uint64_t kPairStreamTag = 0x70616972ULL << 32;  // "pair"

void validate_config(const Dataset& data, const MixupConfig& cfg) {
  if (data.row_count() < 2)
    throw std::invalid_argument("synthesis needs at least 2 input rows");
  if (cfg.m == 0) throw std::invalid_argument("output size m must be positive");
  if (const auto* general = std::get_if<GeneralScheme>(&cfg.scheme)) {
    for (const std::size_t c : data.schema().continuous_indices()) {
      if (!general->per_column.count(data.schema().at(c).name))
        throw std::invalid_argument("general scheme is missing a weight for column \"" +
                                    data.schema().at(c).name + "\"");
    }
    for (const auto& [name, _] : general->per_column) {
      const std::size_t idx = data.schema().index_of(name);
      if (idx == Schema::npos)
        throw std::invalid_argument("general scheme names unknown column \"" + name +
                                    "\"");
      if (data.schema().at(idx).kind == ColumnKind::kCategorical)
        throw std::invalid_argument(
            "general scheme: categorical column \"" + name +
            "\" is driven by categorical_weight, not a per-column entry");
    }
  }
}

}  // namespace

unsigned worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("MIXPRESERVE_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned long>(cap) < n)
      n = static_cast<unsigned>(cap);
  }
  return n;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> pair_indices(
    std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("pair_indices needs n >= 2 rows");
  if (m == 0) throw std::invalid_argument("pair_indices needs m >= 1");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs(m);
  for (std::size_t k = 0; k < m; ++k) {
    RngStream rng(seed, kPairStreamTag | k);
    pairs[k] = {static_cast<std::uint32_t>(rng.uniform_index(n)),
                static_cast<std::uint32_t>(rng.uniform_index(n))};
  }
  return pairs;
}

Dataset synthesize(const Dataset& data, const MixupConfig& cfg) {
  validate_config(data, cfg);
  const Schema& schema = data.schema();
  const std::size_t n = data.row_count();
  const std::size_t m = cfg.m;
  const auto continuous = schema.continuous_indices();
  const auto categorical = schema.categorical_indices();

  // per-continuous-column law under the general scheme, in schema order
  std::vector<const WeightDistribution*> column_laws(schema.size(), nullptr);
  const WeightDistribution* categorical_law = nullptr;
  const WeightDistribution* shared_law = nullptr;
  if (const auto* standard = std::get_if<StandardScheme>(&cfg.scheme)) {
    shared_law = &standard->weight;
  } else {
    const auto& general = std::get<GeneralScheme>(cfg.scheme);
    for (const std::size_t c : continuous)
      column_laws[c] = &general.per_column.at(schema.at(c).name);
    categorical_law = &general.categorical_weight;
  }

  Dataset out = data.like();
  out.reserve(m);
  std::vector<double> zero(schema.size(), 0.0);
  for (std::size_t k = 0; k < m; ++k) out.append_row(zero);

  std::vector<std::vector<double>*> out_cols(schema.size());
  for (std::size_t c = 0; c < schema.size(); ++c)
    out_cols[c] = &out.mutable_column(c);

  const auto fill_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      RngStream pair_rng(cfg.seed, kPairStreamTag | k);
      const std::size_t i = pair_rng.uniform_index(n);
      const std::size_t j = pair_rng.uniform_index(n);
      RngStream rng(cfg.seed, k);
      if (shared_law) {
        const double w = sample(*shared_law, rng);
        for (const std::size_t c : continuous)
          (*out_cols[c])[k] = mix_value(w, data.cell(i, c), data.cell(j, c));
        for (const std::size_t c : categorical)
          (*out_cols[c])[k] =
              pick_label(w, cfg.tau, data.category_id(i, c), data.category_id(j, c));
      } else {
        for (const std::size_t c : continuous) {
          const double w = sample(*column_laws[c], rng);
          (*out_cols[c])[k] = mix_value(w, data.cell(i, c), data.cell(j, c));
        }
        if (!categorical.empty()) {
          const double wl = sample(*categorical_law, rng);
          for (const std::size_t c : categorical)
            (*out_cols[c])[k] = pick_label(wl, cfg.tau, data.category_id(i, c),
                                           data.category_id(j, c));
        }
      }
    }
  };

  const unsigned workers = worker_count();
  if (workers <= 1 || m < 4096) {
    fill_rows(0, m);
  } else {
    std::vector<std::thread> threads;
    const std::size_t chunk = (m + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(m, begin + chunk);
      if (begin >= end) break;
      threads.emplace_back(fill_rows, begin, end);
    }
    for (auto& th : threads) th.join();
  }
  return out;
}

std::vector<Dataset> resynthesize(const Dataset& data, const MixupConfig& cfg,
                                  std::size_t generations) {
  if (generations == 0)
    throw std::invalid_argument("resynthesize needs generations >= 1");
  std::vector<Dataset> chain;
  chain.reserve(generations);
  const Dataset* parent = &data;
  for (std::size_t g = 1; g <= generations; ++g) {
    MixupConfig gen_cfg = cfg;
    gen_cfg.seed = cfg.seed ^ g;
    chain.push_back(synthesize(*parent, gen_cfg));
    parent = &chain.back();
  }
  return chain;
}

}  // namespace mixpreserve
