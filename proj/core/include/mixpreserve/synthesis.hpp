#ifndef MIXPRESERVE_SYNTHESIS_HPP
#define MIXPRESERVE_SYNTHESIS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mixpreserve/dataset.hpp"
#include "mixpreserve/weights.hpp"

// The mixup engine. Each synthetic row k picks parents (i_k, j_k) uniformly
// and independently (i = j allowed), mixes continuous cells as
// w*x_i + (1-w)*x_j and assigns the categorical cells to the i-parent when
// the categorical weight is >= tau, the j-parent otherwise.

namespace mixpreserve {

struct StandardScheme {
  WeightDistribution weight;  // one draw per row, shared by all columns
};

// Independent draws per continuous column; one extra draw drives every
// categorical column of the row jointly.
struct GeneralScheme {
  std::map<std::string, WeightDistribution> per_column;
  WeightDistribution categorical_weight;
};

struct MixupConfig {
  std::variant<StandardScheme, GeneralScheme> scheme{
      StandardScheme{WeightDistribution(UniformLaw{})}};
  double tau = 0.5;
  std::size_t m = 0;
  std::uint64_t seed = 0;
};

// Eq. kernels, exposed for direct checking.
inline double mix_value(double w, double xi, double xj) {
  return w * xi + (1.0 - w) * xj;
}
inline std::uint32_t pick_label(double w, double tau, std::uint32_t li,
                                std::uint32_t lj) {
  return w >= tau ? li : lj;
}

// m parent pairs, both coordinates uniform on [0, n); deterministic in seed.
// Throws std::invalid_argument when n < 2.
std::vector<std::pair<std::uint32_t, std::uint32_t>> pair_indices(
    std::size_t n, std::size_t m, std::uint64_t seed);

// cfg.m synthetic rows with the input's schema. Parallel over rows; the
// result is identical regardless of thread count.
Dataset synthesize(const Dataset& data, const MixupConfig& cfg);

// Chain of `generations` datasets, generation g synthesized from g-1 with
// seed cfg.seed ^ g. Element 0 of the result is generation 1.
std::vector<Dataset> resynthesize(const Dataset& data, const MixupConfig& cfg,
                                  std::size_t generations);

// worker count: MIXPRESERVE_THREADS when set, hardware concurrency otherwise
unsigned worker_count();

}  // namespace mixpreserve

#endif
