#pragma once

// Inner loops shared by the solvers. Every kernel exists twice: a plain
// serial reference and an OpenMP version that splits the work over
// independent output entries. Each output entry is accumulated in the same
// order in both versions, so results are bit-identical regardless of the
// thread count.

#include <cstddef>
#include <span>

namespace skm::kernels {

struct ArgMax {
  std::size_t index = 0;
  double value = 0.0;  // squared residual at index
};

/// Row-major view of `rows` x `cols` doubles.
struct MatrixView {
  const double* data;
  std::size_t rows;
  std::size_t cols;

  std::span<const double> row(std::size_t i) const noexcept {
    return {data + i * cols, cols};
  }
};

namespace serial {

void matvec(MatrixView a, std::span<const double> x, std::span<double> out);

/// Smallest j maximizing (a_j . x - b_j)^2.
ArgMax max_residual(MatrixView a, std::span<const double> b,
                    std::span<const double> x);

/// out = S^T A and out_rhs = S^T b, where S (a.rows x c, row-major) pairs
/// row j of S with row j of A. out is c x a.cols.
void sketch_product(MatrixView s, MatrixView a, std::span<const double> b,
                    std::span<double> out, std::span<double> out_rhs);

}  // namespace serial

namespace parallel {

void matvec(MatrixView a, std::span<const double> x, std::span<double> out);
ArgMax max_residual(MatrixView a, std::span<const double> b,
                    std::span<const double> x);
void sketch_product(MatrixView s, MatrixView a, std::span<const double> b,
                    std::span<double> out, std::span<double> out_rhs);

}  // namespace parallel

/// Multiply-add count below which the dispatchers stay serial.
inline constexpr std::size_t kParallelThreshold = 1u << 16;

// Dispatchers used by the library: parallel when the problem is large and
// more than one OpenMP thread is available.
void matvec(MatrixView a, std::span<const double> x, std::span<double> out);
ArgMax max_residual(MatrixView a, std::span<const double> b,
                    std::span<const double> x);
void sketch_product(MatrixView s, MatrixView a, std::span<const double> b,
                    std::span<double> out, std::span<double> out_rhs);

}  // namespace skm::kernels
