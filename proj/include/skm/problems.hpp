#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>

#include "skm/linalg.hpp"
#include "skm/random.hpp"
#include "skm/system.hpp"

namespace skm {

enum class ModelKind {
  GaussianIID,      // A_ij ~ N(0, 1)
  CoherentUniform,  // A_ij ~ Unif[0.8, 1): nearly collinear rows
};

std::string_view to_string(ModelKind kind);
/// "gaussian" or "coherent".
ModelKind parse_model(std::string_view name);

struct ModelSpec {
  ModelKind kind = ModelKind::GaussianIID;
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::uint64_t seed = 0;
};

/// Draws A row-major from the model, then x_star ~ N(0, I) from the same
/// stream, and sets b = A x_star.
LinearSystem generate_system(const ModelSpec& spec);

struct PlantedSolution {
  Vector b;
  Vector x_star;
};

/// x_star with iid N(0,1) entries (redrawn if it is exactly zero), b = A x_star.
PlantedSolution plant_solution(const DenseMatrix& a, Rng& rng);
PlantedSolution plant_solution(const DenseMatrix& a, std::uint64_t seed);

struct CsvOptions {
  char delimiter = ',';
  std::size_t skip_rows = 0;
  /// Column moved out of A into b. Without it a solution is planted.
  std::optional<std::size_t> target_column;
  std::uint64_t plant_seed = 0;
};

/// Numeric matrix from CSV text. Fields may be double-quoted; blank lines are
/// ignored. Errors name the 1-based line.
DenseMatrix parse_csv_matrix(std::istream& in, char delimiter = ',',
                             std::size_t skip_rows = 0);

LinearSystem load_csv_system(const std::filesystem::path& path,
                             const CsvOptions& opts = {});

/// Writes A with shortest round-trip decimal formatting.
void save_csv_matrix(const DenseMatrix& a, const std::filesystem::path& path,
                     char delimiter = ',');

/// Little-endian binary system file:
///   magic "SKMSYS\0\0", u32 version, u32 flags (bit 0: x_star present),
///   u64 rows, u64 cols, f64 A[rows*cols] row-major, f64 b[rows],
///   f64 x_star[cols] if flagged.
inline constexpr std::uint32_t kSystemFormatVersion = 1;

void save_system(const LinearSystem& sys, const std::filesystem::path& path);
LinearSystem load_system(const std::filesystem::path& path);

void write_system(const LinearSystem& sys, std::ostream& out);
LinearSystem read_system(std::istream& in);

}  // namespace skm
