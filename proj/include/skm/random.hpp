#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

#include "skm/linalg.hpp"

namespace skm {

/// Seedable random source. The same seed replays the same stream within one
/// build. Not thread-safe; parallel trials each own an Rng.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// One N(0,1) draw (polar method, via std::normal_distribution).
  double standard_normal() { return normal_(engine_); }

  /// rows x cols matrix of iid N(0,1) entries, filled row-major.
  DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols);

  /// Fills `out` with iid N(0,1) draws in order.
  void fill_normal(std::span<double> out);

  /// Uniform over {0, ..., k-1}.
  std::size_t uniform_index(std::size_t k);

  /// Uniform on [lo, hi).
  double uniform_real(double lo, double hi);

  /// Index i with probability weights[i] / sum(weights).
  std::size_t weighted_index(std::span<const double> weights);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Precomputed sampler for repeated draws from one weight vector.
class WeightedSampler {
 public:
  explicit WeightedSampler(std::span<const double> weights);

  std::size_t operator()(Rng& rng) { return dist_(rng.engine()); }

 private:
  std::discrete_distribution<std::size_t> dist_;
};

}  // namespace skm
