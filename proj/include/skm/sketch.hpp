#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "skm/linalg.hpp"
#include "skm/random.hpp"
#include "skm/system.hpp"

namespace skm {

enum class SketchKind { Block, Gaussian, SparseGaussian };

std::string_view to_string(SketchKind kind);

struct SketchSpec {
  SketchKind kind = SketchKind::Block;
  std::size_t s = 1;
};

/// Throws InvalidArgument unless s >= 1, and s <= rows for block-based kinds.
void validate(const SketchSpec& spec, std::size_t rows);

struct SketchProvenance {
  /// Block index z for Block and SparseGaussian sketches; shift = s * z.
  std::optional<std::size_t> block;
  std::size_t shift = 0;
  /// Floating-point multiplies spent forming S^T A and S^T b.
  std::size_t multiplies = 0;
};

/// The s rows of S^T A and the matching entries of S^T b.
struct SketchedSystem {
  DenseMatrix rows;
  Vector rhs;
  SketchProvenance provenance;
};

/// Number of disjoint size-s blocks; rows past blocks(m, s) * s are never
/// sampled.
inline std::size_t block_count(std::size_t m, std::size_t s) { return m / s; }

/// Rows [s z, s z + s) of A and b. No randomness, no multiplies.
SketchedSystem block_at(const LinearSystem& sys, std::size_t s,
                        std::size_t z);

/// Draws z uniformly from {0, ..., m/s - 1} and returns block_at(z).
SketchedSystem block_sketch(const LinearSystem& sys, std::size_t s, Rng& rng);

/// S^T A, S^T b for a given m x s sketch matrix S.
SketchedSystem apply_gaussian(const LinearSystem& sys, const DenseMatrix& s);

/// Draws a fresh m x s iid N(0,1) matrix S (row-major order) and applies it.
SketchedSystem gaussian_sketch(const LinearSystem& sys, std::size_t s,
                               Rng& rng);

/// X^T A', X^T b' for the s x n block A' starting at block index z and a
/// given s x s matrix X. Equals S^T A for S = (0, X, 0)^T.
SketchedSystem apply_sparse_gaussian(const LinearSystem& sys, std::size_t z,
                                     const DenseMatrix& x);

/// Draws the block index (unless fixed_block pins it), then a fresh s x s
/// iid N(0,1) matrix X, and applies it.
SketchedSystem sparse_gaussian_sketch(
    const LinearSystem& sys, std::size_t s, Rng& rng,
    std::optional<std::size_t> fixed_block = {});

/// Dispatches on spec.kind. fixed_block is honored by SparseGaussian only.
SketchedSystem draw_sketch(const LinearSystem& sys, const SketchSpec& spec,
                           Rng& rng,
                           std::optional<std::size_t> fixed_block = {});

}  // namespace skm
