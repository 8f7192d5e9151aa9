#include "skm/sketch.hpp"

#include <sstream>
#include <vector>

#include "skm/error.hpp"
#include "skm/kernels.hpp"

namespace skm {

std::string_view to_string(SketchKind kind) {
  switch (kind) {
    case SketchKind::Block: return "block";
    case SketchKind::Gaussian: return "gaussian";
    case SketchKind::SparseGaussian: return "sparse-gaussian";
  }
  return "?";
}

void validate(const SketchSpec& spec, std::size_t rows) {
  require(spec.s >= 1, "sketch size must be >= 1");
  if (spec.kind != SketchKind::Gaussian && spec.s > rows) {
    std::ostringstream msg;
    msg << "sketch size " << spec.s << " exceeds the " << rows
        << " rows of the system";
    fail(ErrorKind::InvalidArgument, msg.str());
  }
}

namespace {

kernels::MatrixView view(const DenseMatrix& a) {
  return {a.data().data(), a.rows(), a.cols()};
}

kernels::MatrixView block_view(const LinearSystem& sys, std::size_t shift,
                               std::size_t s) {
  return {sys.a().data().data() + shift * sys.cols(), s, sys.cols()};
}

void check_block(const LinearSystem& sys, std::size_t s, std::size_t z) {
  validate({SketchKind::Block, s}, sys.rows());
  if (z >= block_count(sys.rows(), s)) {
    std::ostringstream msg;
    msg << "block index " << z << " out of range: " << sys.rows()
        << " rows hold " << block_count(sys.rows(), s) << " blocks of size "
        << s;
    fail(ErrorKind::InvalidArgument, msg.str());
  }
}

}  // namespace

SketchedSystem block_at(const LinearSystem& sys, std::size_t s,
                        std::size_t z) {
  check_block(sys, s, z);
  const std::size_t shift = s * z;
  const auto src = sys.a().data().subspan(shift * sys.cols(), s * sys.cols());
  const auto rhs = std::span(sys.b()).subspan(shift, s);
  return {DenseMatrix(s, sys.cols(), {src.begin(), src.end()}),
          Vector(rhs.begin(), rhs.end()),
          {z, shift, 0}};
}

SketchedSystem block_sketch(const LinearSystem& sys, std::size_t s, Rng& rng) {
  validate({SketchKind::Block, s}, sys.rows());
  return block_at(sys, s, rng.uniform_index(block_count(sys.rows(), s)));
}

SketchedSystem apply_gaussian(const LinearSystem& sys, const DenseMatrix& s) {
  require(s.rows() == sys.rows(),
          "gaussian sketch must have as many rows as the system");
  const std::size_t k = s.cols();
  const std::size_t n = sys.cols();
  std::vector<double> out(k * n);
  Vector rhs(k);
  kernels::sketch_product(view(s), view(sys.a()), sys.b(), out, rhs);
  return {DenseMatrix(k, n, std::move(out)), std::move(rhs),
          {std::nullopt, 0, sys.rows() * k * (n + 1)}};
}

SketchedSystem gaussian_sketch(const LinearSystem& sys, std::size_t s,
                               Rng& rng) {
  validate({SketchKind::Gaussian, s}, sys.rows());
  return apply_gaussian(sys, rng.gaussian_matrix(sys.rows(), s));
}

SketchedSystem apply_sparse_gaussian(const LinearSystem& sys, std::size_t z,
                                     const DenseMatrix& x) {
  require(x.rows() == x.cols(), "sparse gaussian block must be square");
  const std::size_t s = x.rows();
  check_block(sys, s, z);
  const std::size_t shift = s * z;
  const std::size_t n = sys.cols();
  std::vector<double> out(s * n);
  Vector rhs(s);
  kernels::sketch_product(view(x), block_view(sys, shift, s),
                          std::span(sys.b()).subspan(shift, s), out, rhs);
  return {DenseMatrix(s, n, std::move(out)), std::move(rhs),
          {z, shift, s * s * (n + 1)}};
}

SketchedSystem sparse_gaussian_sketch(const LinearSystem& sys, std::size_t s,
                                      Rng& rng,
                                      std::optional<std::size_t> fixed_block) {
  validate({SketchKind::SparseGaussian, s}, sys.rows());
  const std::size_t z =
      fixed_block ? *fixed_block
                  : rng.uniform_index(block_count(sys.rows(), s));
  check_block(sys, s, z);
  return apply_sparse_gaussian(sys, z, rng.gaussian_matrix(s, s));
}

SketchedSystem draw_sketch(const LinearSystem& sys, const SketchSpec& spec,
                           Rng& rng, std::optional<std::size_t> fixed_block) {
  switch (spec.kind) {
    case SketchKind::Block: return block_sketch(sys, spec.s, rng);
    case SketchKind::Gaussian: return gaussian_sketch(sys, spec.s, rng);
    case SketchKind::SparseGaussian:
      return sparse_gaussian_sketch(sys, spec.s, rng, fixed_block);
  }
  fail(ErrorKind::InvalidArgument, "unknown sketch kind");
}

}  // namespace skm
