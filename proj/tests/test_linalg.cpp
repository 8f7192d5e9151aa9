#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "skm/error.hpp"
#include "skm/linalg.hpp"
#include "skm/random.hpp"

using skm::DenseMatrix;

namespace {

bool rel_close(double got, double want, double rel) {
  return std::abs(got - want) <= rel * std::max(std::abs(want), 1e-300);
}

DenseMatrix diag_padded(std::vector<double> d, std::size_t rows) {
  const std::size_t n = d.size();
  std::vector<double> data(rows * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) data[i * n + i] = d[i];
  return DenseMatrix(rows, n, std::move(data));
}

}  // namespace

TEST_CASE("DenseMatrix rejects bad construction") {
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1, 2, 3}), skm::Error);
  CHECK_THROWS_AS(DenseMatrix(0, 2, {}), skm::Error);
  CHECK_THROWS_AS(DenseMatrix(1, 2, {1, NAN}), skm::Error);
  CHECK_THROWS_AS(DenseMatrix(1, 2, {INFINITY, 0}), skm::Error);
}

TEST_CASE("matvec") {
  const auto id = DenseMatrix::identity(2);
  CHECK(skm::matvec(id, std::vector<double>{3, -1}) ==
        std::vector<double>{3, -1});

  const DenseMatrix a(2, 2, {1, 2, 3, 4});
  CHECK(skm::matvec(a, std::vector<double>{1, 1}) == std::vector<double>{3, 7});

  CHECK_THROWS_AS(skm::matvec(a, std::vector<double>{1, 1, 1}), skm::Error);

  const auto g = oracle::gaussian(50, 10, 11);
  const auto x = oracle::gaussian_vector(10, 12);
  const auto got = skm::matvec(g, x);
  const auto want = oracle::matvec(oracle::to_nested(g), x);
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(std::abs(got[i] - want[i]) <= 1e-12 * (1.0 + std::abs(want[i])));
  }
}

TEST_CASE("row_norm_sq") {
  CHECK(skm::row_norm_sq(DenseMatrix(1, 2, {3, 4}), 0) == 25.0);
  CHECK(skm::row_norm_sq(DenseMatrix(2, 2, {0, 0, 1, 1}), 0) == 0.0);
  CHECK_THROWS_AS(skm::row_norm_sq(DenseMatrix(1, 2, {3, 4}), 1), skm::Error);

  const auto g = oracle::gaussian(20, 5, 3);
  const auto nested = oracle::to_nested(g);
  CHECK(rel_close(skm::row_norm_sq(g, 7), oracle::sum_squares(nested[7]),
                  1e-14));
}

TEST_CASE("frobenius_norm_sq") {
  CHECK(skm::frobenius_norm_sq(DenseMatrix::identity(7)) == 7.0);
  CHECK(skm::frobenius_norm_sq(DenseMatrix(2, 2, {1, 2, 3, 4})) == 30.0);
  const auto g = oracle::gaussian(100, 20, 5);
  CHECK(rel_close(skm::frobenius_norm_sq(g),
                  oracle::frobenius_sq(oracle::to_nested(g)), 1e-12));
}

TEST_CASE("frobenius equals the sum of row norms") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = oracle::gaussian(5 + seed * 3, 1 + seed % 7, seed);
    double rows = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) rows += skm::row_norm_sq(g, i);
    CHECK(rel_close(skm::frobenius_norm_sq(g), rows, 1e-12));
  }
}

TEST_CASE("smallest_singular_value") {
  CHECK(rel_close(skm::smallest_singular_value(DenseMatrix::identity(6)), 1.0,
                  1e-12));
  CHECK(rel_close(
      skm::smallest_singular_value(diag_padded({5, 2, 0.5}, 6)), 0.5, 1e-12));
  CHECK(skm::smallest_singular_value(diag_padded({5, 0, 1}, 4)) == 0.0);
  CHECK_THROWS_AS(skm::smallest_singular_value(DenseMatrix(2, 3)), skm::Error);

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto g = oracle::gaussian(30, 6, seed);
    CHECK(rel_close(skm::smallest_singular_value(g),
                    oracle::smin_via_gram(oracle::to_nested(g)), 1e-6));
  }
}

TEST_CASE("smallest_singular_value detects numerically rank-deficient input") {
  // Third column = first + second: s_min is zero in exact arithmetic.
  auto g = oracle::gaussian(40, 3, 9);
  std::vector<double> d(g.data().begin(), g.data().end());
  for (std::size_t i = 0; i < 40; ++i) d[i * 3 + 2] = d[i * 3] + d[i * 3 + 1];
  const DenseMatrix a(40, 3, std::move(d));
  CHECK(skm::smallest_singular_value(a) <=
        1e-12 * std::sqrt(skm::frobenius_norm_sq(a)));
  CHECK_THROWS_AS(skm::condition_kappa_tilde(a), skm::Error);
}

TEST_CASE("smallest_singular_value is invariant under row permutation") {
  const auto g = oracle::gaussian(25, 5, 21);
  std::vector<std::size_t> perm(25);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::rotate(perm.begin(), perm.begin() + 7, perm.end());
  std::vector<double> d;
  for (std::size_t p : perm) {
    const auto row = g.row(p);
    d.insert(d.end(), row.begin(), row.end());
  }
  const DenseMatrix permuted(25, 5, std::move(d));
  CHECK(rel_close(skm::smallest_singular_value(permuted),
                  skm::smallest_singular_value(g), 1e-8));
}

TEST_CASE("||Ax|| >= s_min ||x|| on random x") {
  const auto g = oracle::gaussian(60, 8, 31);
  const double smin = skm::smallest_singular_value(g);
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto x = oracle::gaussian_vector(8, 1000 + k);
    const double lhs = skm::norm(skm::matvec(g, x));
    CHECK(lhs >= smin * skm::norm(x) * (1.0 - 1e-6));
  }
}

TEST_CASE("condition_kappa_tilde") {
  const auto id = skm::condition_kappa_tilde(DenseMatrix::identity(9));
  CHECK(rel_close(id.kappa_tilde, 9.0, 1e-12));

  const auto d = skm::condition_kappa_tilde(DenseMatrix(2, 2, {2, 0, 0, 1}));
  CHECK(d.frobenius_sq == 5.0);
  CHECK(rel_close(d.s_min, 1.0, 1e-12));
  CHECK(rel_close(d.kappa_tilde, 5.0, 1e-12));

  const auto g = oracle::gaussian(200, 20, 77);
  const auto st = skm::condition_kappa_tilde(g);
  const auto nested = oracle::to_nested(g);
  const double fro = oracle::frobenius_sq(nested);
  const double smin = oracle::smin_via_gram(nested);
  CHECK(rel_close(st.frobenius_sq, fro, 1e-6));
  CHECK(rel_close(st.s_min, smin, 1e-6));
  CHECK(rel_close(st.kappa_tilde, fro / (smin * smin), 1e-6));
  CHECK(st.kappa_tilde >= 20.0);

  try {
    skm::condition_kappa_tilde(diag_padded({1, 0}, 3));
    FAIL("expected rank-deficiency error");
  } catch (const skm::Error& e) {
    CHECK(e.kind() == skm::ErrorKind::Numerical);
    CHECK(std::string(e.what()).find("s_min") != std::string::npos);
  }
}

TEST_CASE("dynamic_range") {
  CHECK(skm::dynamic_range(std::vector<double>{0, 0, 5}) == 1.0);
  CHECK(skm::dynamic_range(std::vector<double>{1, 1, 1, 1}) == 4.0);
  CHECK(skm::dynamic_range(std::vector<double>{-2, 2}) == 2.0);
  CHECK_THROWS_AS(skm::dynamic_range(std::vector<double>{0, 0}), skm::Error);

  const auto a = oracle::gaussian(40, 6, 4);
  const auto x = oracle::gaussian_vector(6, 5);
  const auto xs = oracle::gaussian_vector(6, 6);
  std::vector<double> diff(6);
  for (int k = 0; k < 6; ++k) diff[k] = x[k] - xs[k];
  const auto r = oracle::matvec(oracle::to_nested(a), diff);
  double peak = 0.0;
  for (double v : r) peak = std::max(peak, v * v);
  const double want = oracle::sum_squares(r) / peak;
  CHECK(rel_close(skm::dynamic_range(a, x, xs), want, 1e-12));
  CHECK_THROWS_AS(skm::dynamic_range(a, x, x), skm::Error);
}

TEST_CASE("dynamic_range stays within [1, m]") {
  skm::Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng.uniform_index(30);
    std::vector<double> r(m);
    for (auto& v : r) v = rng.uniform_index(3) == 0 ? 0.0 : rng.standard_normal();
    if (std::all_of(r.begin(), r.end(), [](double v) { return v == 0.0; })) {
      r[0] = 1.0;
    }
    const double g = skm::dynamic_range(r);
    CHECK(g >= 1.0);
    CHECK(g <= static_cast<double>(m));
  }
}
