#include "skm/random.hpp"

#include <cmath>
#include <vector>

#include "skm/error.hpp"

namespace skm {

DenseMatrix Rng::gaussian_matrix(std::size_t rows, std::size_t cols) {
  require(rows >= 1 && cols >= 1, "gaussian_matrix: dimensions must be >= 1");
  std::vector<double> d(rows * cols);
  fill_normal(d);
  return DenseMatrix(rows, cols, std::move(d));
}

void Rng::fill_normal(std::span<double> out) {
  for (double& v : out) v = normal_(engine_);
}

std::size_t Rng::uniform_index(std::size_t k) {
  require(k >= 1, "uniform_index: k must be >= 1");
  return std::uniform_int_distribution<std::size_t>(0, k - 1)(engine_);
}

double Rng::uniform_real(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
          "uniform_real: requires finite lo < hi");
  double v = std::uniform_real_distribution<double>(lo, hi)(engine_);
  // libstdc++ may round up to hi for some (lo, hi) pairs.
  return v < hi ? v : lo;
}

namespace {

void check_weights(std::span<const double> weights) {
  require(!weights.empty(), "weighted sampling: empty weight vector");
  double total = 0.0;
  for (double w : weights) {
    require(std::isfinite(w) && w >= 0.0,
            "weighted sampling: weights must be finite and nonnegative");
    total += w;
  }
  require(total > 0.0, "weighted sampling: all weights are zero");
}

}  // namespace

std::size_t Rng::weighted_index(std::span<const double> weights) {
  return WeightedSampler(weights)(*this);
}

WeightedSampler::WeightedSampler(std::span<const double> weights) {
  check_weights(weights);
  dist_ = std::discrete_distribution<std::size_t>(weights.begin(),
                                                  weights.end());
}

}  // namespace skm
