#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace skm {

using Vector = std::vector<double>;

/// Row-major m x n real matrix. Entries are checked to be finite on
/// construction and the object is immutable afterwards.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  /// rows x cols matrix of zeros.
  DenseMatrix(std::size_t rows, std::size_t cols);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// kappa_tilde = frobenius_sq / s_min^2.
struct ConditionStats {
  double frobenius_sq = 0.0;
  double s_min = 0.0;
  double kappa_tilde = 0.0;
};

/// Throws InvalidArgument if any entry is NaN or infinite.
void check_finite(std::span<const double> v, const char* what);

double dot(std::span<const double> a, std::span<const double> b);
double norm_sq(std::span<const double> v);
double norm(std::span<const double> v);
double distance_sq(std::span<const double> a, std::span<const double> b);

Vector matvec(const DenseMatrix& a, std::span<const double> x);

/// A x - b.
Vector residual(const DenseMatrix& a, std::span<const double> x,
                std::span<const double> b);

double row_norm_sq(const DenseMatrix& a, std::size_t i);
double frobenius_norm_sq(const DenseMatrix& a);

/// Smallest singular value of a tall matrix (rows >= cols), computed with
/// one-sided Jacobi rotations on the columns of A. Returns 0 for exactly
/// rank-deficient input.
double smallest_singular_value(const DenseMatrix& a);

/// Frobenius norm, s_min and their ratio. Throws Numerical when
/// s_min <= 1e-12 * ||A||_F.
ConditionStats condition_kappa_tilde(const DenseMatrix& a);

/// ||r||_2^2 / ||r||_inf^2 for a nonzero vector r; lies in [1, len(r)].
double dynamic_range(std::span<const double> r);

/// Dynamic range of the residual A(x - x_star).
double dynamic_range(const DenseMatrix& a, std::span<const double> x,
                     std::span<const double> x_star);

}  // namespace skm
