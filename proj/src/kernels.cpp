#include "skm/kernels.hpp"

#include <algorithm>
#include <omp.h>

namespace skm::kernels {

namespace {

double row_dot(std::span<const double> row, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) acc += row[k] * x[k];
  return acc;
}

void axpy(double w, std::span<const double> x, double* y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += w * x[k];
}

bool better(const ArgMax& cand, const ArgMax& best) {
  return cand.value > best.value ||
         (cand.value == best.value && cand.index < best.index);
}

bool go_parallel(std::size_t work) {
  return work >= kParallelThreshold && omp_get_max_threads() > 1;
}

}  // namespace

namespace serial {

void matvec(MatrixView a, std::span<const double> x, std::span<double> out) {
  for (std::size_t i = 0; i < a.rows; ++i) out[i] = row_dot(a.row(i), x);
}

ArgMax max_residual(MatrixView a, std::span<const double> b,
                    std::span<const double> x) {
  ArgMax best{0, -1.0};
  for (std::size_t j = 0; j < a.rows; ++j) {
    const double r = row_dot(a.row(j), x) - b[j];
    const double sq = r * r;
    if (sq > best.value) best = {j, sq};
  }
  return best;
}

void sketch_product(MatrixView s, MatrixView a, std::span<const double> b,
                    std::span<double> out, std::span<double> out_rhs) {
  std::fill(out.begin(), out.end(), 0.0);
  std::fill(out_rhs.begin(), out_rhs.end(), 0.0);
  for (std::size_t j = 0; j < a.rows; ++j) {
    const auto srow = s.row(j);
    const auto arow = a.row(j);
    for (std::size_t i = 0; i < s.cols; ++i) {
      axpy(srow[i], arow, out.data() + i * a.cols);
      out_rhs[i] += srow[i] * b[j];
    }
  }
}

}  // namespace serial

namespace parallel {

void matvec(MatrixView a, std::span<const double> x, std::span<double> out) {
  const auto rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    out[static_cast<std::size_t>(i)] =
        row_dot(a.row(static_cast<std::size_t>(i)), x);
  }
}

ArgMax max_residual(MatrixView a, std::span<const double> b,
                    std::span<const double> x) {
  ArgMax best{0, -1.0};
  const auto rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel
  {
    ArgMax local{0, -1.0};
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t j = 0; j < rows; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      const double r = row_dot(a.row(ju), x) - b[ju];
      const double sq = r * r;
      if (sq > local.value) local = {ju, sq};
    }
#pragma omp critical
    if (better(local, best)) best = local;
  }
  return best;
}

void sketch_product(MatrixView s, MatrixView a, std::span<const double> b,
                    std::span<double> out, std::span<double> out_rhs) {
  const auto cols = static_cast<std::ptrdiff_t>(s.cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < cols; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double* orow = out.data() + i * a.cols;
    std::fill(orow, orow + a.cols, 0.0);
    double rhs = 0.0;
    for (std::size_t j = 0; j < a.rows; ++j) {
      const double w = s.data[j * s.cols + i];
      axpy(w, a.row(j), orow);
      rhs += w * b[j];
    }
    out_rhs[i] = rhs;
  }
}

}  // namespace parallel

void matvec(MatrixView a, std::span<const double> x, std::span<double> out) {
  if (go_parallel(a.rows * a.cols)) {
    parallel::matvec(a, x, out);
  } else {
    serial::matvec(a, x, out);
  }
}

ArgMax max_residual(MatrixView a, std::span<const double> b,
                    std::span<const double> x) {
  return go_parallel(a.rows * a.cols) ? parallel::max_residual(a, b, x)
                                      : serial::max_residual(a, b, x);
}

void sketch_product(MatrixView s, MatrixView a, std::span<const double> b,
                    std::span<double> out, std::span<double> out_rhs) {
  if (go_parallel(a.rows * a.cols * s.cols)) {
    parallel::sketch_product(s, a, b, out, out_rhs);
  } else {
    serial::sketch_product(s, a, b, out, out_rhs);
  }
}

}  // namespace skm::kernels
