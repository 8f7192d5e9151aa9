#pragma once

#include <optional>

#include "skm/linalg.hpp"

namespace skm {

/// Consistent overdetermined system A x = b (rows >= cols), optionally with
/// a known planted solution x_star.
class LinearSystem {
 public:
  /// Validates shapes and finiteness. When x_star is given it must satisfy
  /// ||A x_star - b|| <= 1e-10 (1 + ||b||).
  LinearSystem(DenseMatrix a, Vector b, std::optional<Vector> x_star = {});

  const DenseMatrix& a() const noexcept { return a_; }
  const Vector& b() const noexcept { return b_; }
  const std::optional<Vector>& x_star() const noexcept { return x_star_; }

  std::size_t rows() const noexcept { return a_.rows(); }
  std::size_t cols() const noexcept { return a_.cols(); }

  friend bool operator==(const LinearSystem&, const LinearSystem&) = default;

 private:
  DenseMatrix a_;
  Vector b_;
  std::optional<Vector> x_star_;
};

}  // namespace skm
