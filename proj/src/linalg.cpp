#include "skm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "skm/error.hpp"
#include "skm/kernels.hpp"

namespace skm {

void check_finite(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      std::ostringstream msg;
      msg << what << ": non-finite entry at position " << i;
      fail(ErrorKind::InvalidArgument, msg.str());
    }
  }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require(rows_ >= 1 && cols_ >= 1, "matrix dimensions must be positive");
  require(data_.size() == rows_ * cols_,
          "matrix data length does not equal rows * cols");
  check_finite(data_, "matrix");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : DenseMatrix(rows, cols, std::vector<double>(rows * cols, 0.0)) {}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 1.0;
  return DenseMatrix(n, n, std::move(d));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

double norm_sq(std::span<const double> v) { return dot(v, v); }

double norm(std::span<const double> v) { return std::sqrt(norm_sq(v)); }

double distance_sq(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return acc;
}

namespace {

kernels::MatrixView view(const DenseMatrix& a) {
  return {a.data().data(), a.rows(), a.cols()};
}

}  // namespace

Vector matvec(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) {
    std::ostringstream msg;
    msg << "matvec: vector length " << x.size() << " does not match "
        << a.cols() << " columns";
    fail(ErrorKind::InvalidArgument, msg.str());
  }
  Vector out(a.rows());
  kernels::matvec(view(a), x, out);
  return out;
}

Vector residual(const DenseMatrix& a, std::span<const double> x,
                std::span<const double> b) {
  require(b.size() == a.rows(), "residual: right-hand side length mismatch");
  Vector r = matvec(a, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

double row_norm_sq(const DenseMatrix& a, std::size_t i) {
  if (i >= a.rows()) {
    std::ostringstream msg;
    msg << "row index " << i << " out of range for " << a.rows() << " rows";
    fail(ErrorKind::InvalidArgument, msg.str());
  }
  return norm_sq(a.row(i));
}

double frobenius_norm_sq(const DenseMatrix& a) { return norm_sq(a.data()); }

double smallest_singular_value(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  require(m >= n, "smallest_singular_value: matrix must have rows >= cols");

  // Columns of A stored contiguously.
  std::vector<double> w(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) w[j * m + i] = a(i, j);
  auto col = [&](std::size_t j) { return w.data() + j * m; };

  constexpr double tol = 1e-15;
  constexpr int max_sweeps = 80;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        const double* wp = col(p);
        const double* wq = col(q);
        for (std::size_t k = 0; k < m; ++k) {
          alpha += wp[k] * wp[k];
          beta += wq[k] * wq[k];
          gamma += wp[k] * wq[k];
        }
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta))
          continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        double* up = col(p);
        double* uq = col(q);
        for (std::size_t k = 0; k < m; ++k) {
          const double xp = up[k];
          const double xq = uq[k];
          up[k] = c * xp - s * xq;
          uq[k] = s * xp + c * xq;
        }
      }
    }
    if (!rotated) break;
  }

  double smin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    smin = std::min(smin, std::sqrt(norm_sq({col(j), m})));
  }
  return smin;
}

ConditionStats condition_kappa_tilde(const DenseMatrix& a) {
  ConditionStats st;
  st.frobenius_sq = frobenius_norm_sq(a);
  st.s_min = smallest_singular_value(a);
  if (st.s_min <= 1e-12 * std::sqrt(st.frobenius_sq)) {
    std::ostringstream msg;
    msg << "matrix is rank-deficient: s_min = " << st.s_min
        << " <= 1e-12 * ||A||_F = " << 1e-12 * std::sqrt(st.frobenius_sq);
    fail(ErrorKind::Numerical, msg.str());
  }
  st.kappa_tilde = st.frobenius_sq / (st.s_min * st.s_min);
  return st;
}

double dynamic_range(std::span<const double> r) {
  double sum = 0.0;
  double peak = 0.0;
  for (double v : r) {
    sum += v * v;
    peak = std::max(peak, v * v);
  }
  require(peak > 0.0, "dynamic_range: residual is zero");
  return std::clamp(sum / peak, 1.0, static_cast<double>(r.size()));
}

double dynamic_range(const DenseMatrix& a, std::span<const double> x,
                     std::span<const double> x_star) {
  require(x.size() == a.cols() && x_star.size() == a.cols(),
          "dynamic_range: vector length does not match matrix columns");
  Vector d(x.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = x[k] - x_star[k];
  return dynamic_range(matvec(a, d));
}

}  // namespace skm
