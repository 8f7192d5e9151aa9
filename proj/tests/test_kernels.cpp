#include <omp.h>

#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "skm/kernels.hpp"

namespace k = skm::kernels;

namespace {

k::MatrixView view(const skm::DenseMatrix& a) {
  return {a.data().data(), a.rows(), a.cols()};
}

}  // namespace

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
  omp_set_num_threads(4);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::size_t m = 37 * seed + 3;
    const std::size_t n = 5 + seed;
    const auto a = oracle::gaussian(m, n, seed);
    const auto x = oracle::gaussian_vector(n, seed + 100);
    const auto b = oracle::gaussian_vector(m, seed + 200);

    std::vector<double> y1(m), y2(m);
    k::serial::matvec(view(a), x, y1);
    k::parallel::matvec(view(a), x, y2);
    CHECK(y1 == y2);

    const auto r1 = k::serial::max_residual(view(a), b, x);
    const auto r2 = k::parallel::max_residual(view(a), b, x);
    CHECK(r1.index == r2.index);
    CHECK(r1.value == r2.value);

    const std::size_t c = 1 + seed * 2;
    const auto s = oracle::gaussian(m, c, seed + 300);
    std::vector<double> o1(c * n), o2(c * n), h1(c), h2(c);
    k::serial::sketch_product(view(s), view(a), b, o1, h1);
    k::parallel::sketch_product(view(s), view(a), b, o2, h2);
    CHECK(o1 == o2);
    CHECK(h1 == h2);
  }
}

TEST_CASE("max_residual breaks ties by lowest index in both versions") {
  omp_set_num_threads(3);
  // Every row has residual +-1 at x = 0.
  std::vector<double> a(400 * 2, 1.0);
  std::vector<double> b(400);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = i % 2 ? 1.0 : -1.0;
  const k::MatrixView v{a.data(), 400, 2};
  const std::vector<double> x{0.0, 0.0};
  CHECK(k::serial::max_residual(v, b, x).index == 0);
  CHECK(k::parallel::max_residual(v, b, x).index == 0);
}

TEST_CASE("sketch_product matches the triple-loop oracle") {
  const auto a = oracle::gaussian(30, 4, 8);
  const auto s = oracle::gaussian(30, 6, 9);
  const auto b = oracle::gaussian_vector(30, 10);
  std::vector<double> out(6 * 4), rhs(6);
  k::sketch_product(view(s), view(a), b, out, rhs);
  const auto want = oracle::transpose_times(oracle::to_nested(s),
                                            oracle::to_nested(a));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t c = 0; c < 4; ++c)
      CHECK(out[i * 4 + c] == doctest::Approx(want[i][c]).epsilon(1e-12));
}
