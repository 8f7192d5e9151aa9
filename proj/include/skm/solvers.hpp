#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "skm/linalg.hpp"
#include "skm/random.hpp"
#include "skm/sketch.hpp"
#include "skm/system.hpp"

namespace skm {

enum class Method { Kaczmarz, Motzkin, SKM, GSM, SGSM };

inline constexpr Method kAllMethods[] = {Method::Kaczmarz, Method::Motzkin,
                                         Method::SKM, Method::GSM,
                                         Method::SGSM};

std::string_view to_string(Method m);
/// Accepts "kaczmarz", "motzkin", "skm", "gsm", "sgsm" (case-insensitive).
Method parse_method(std::string_view name);

bool is_sketched(Method m);
/// Sketch family used by a sketched method.
SketchSpec sketch_spec(Method m, std::size_t s);

/// Records iterations 0..full_until, then every stride-th iteration. The last
/// iteration of a run is always recorded.
struct TraceThinning {
  std::size_t full_until = 10000;
  std::size_t stride = 10;

  bool keeps(std::size_t iter) const noexcept {
    return iter <= full_until || iter % stride == 0;
  }
};

struct SolverConfig {
  Method method = Method::Motzkin;
  std::size_t s = 1;  // ignored by Kaczmarz and Motzkin
  std::size_t max_iters = 10000;
  double tol = 1e-8;  // stop when ||Ax - b|| <= tol (1 + ||b||)
  std::uint64_t seed = 0;
  std::optional<std::size_t> fixed_block;  // sGSM only
  bool record_error = false;               // requires x_star
  /// Also stop once ||x_k - x*||^2 <= ratio * ||x_0 - x*||^2 (requires x_star).
  std::optional<double> error_ratio_stop;
  std::optional<Vector> x0;  // defaults to zero
  TraceThinning thinning;
};

/// Throws InvalidArgument if the config cannot run on `sys`.
void validate(const SolverConfig& cfg, const LinearSystem& sys);

struct TraceRecord {
  std::size_t iter = 0;
  std::optional<double> error_sq;
  double residual_norm = 0.0;
  /// Solver time since the start, excluding trace bookkeeping.
  std::int64_t elapsed_ns = 0;
};

enum class RunStatus { Converged, MaxIters };

std::string_view to_string(RunStatus st);

struct RunTrace {
  std::vector<TraceRecord> records;
  RunStatus status = RunStatus::MaxIters;
  std::size_t iterations = 0;
};

struct RunResult {
  Vector x;
  RunTrace trace;
};

struct StepResult {
  Vector x;
  std::size_t chosen = 0;  // row of A, or row of the sketched system
  /// Squared residual of the chosen equation before the step.
  double residual_sq = 0.0;
  std::optional<SketchedSystem> sketch;
};

/// Orthogonal projection of x onto {y : <a, y> = beta}. Throws Numerical when
/// ||a||^2 <= 1e-14 max(1, ||x||^2).
Vector project_row(std::span<const double> x, std::span<const double> a,
                   double beta);

/// Smallest j maximizing (m_j . x - r_j)^2.
std::size_t select_max_residual(const DenseMatrix& m,
                                std::span<const double> r,
                                std::span<const double> x);

/// Projects x onto equation i of the system.
StepResult project_onto_equation(const LinearSystem& sys,
                                 std::span<const double> x, std::size_t i);

/// Randomized Kaczmarz: row i drawn with probability ||a_i||^2 / ||A||_F^2.
StepResult kaczmarz_step(const LinearSystem& sys, std::span<const double> x,
                         Rng& rng);

/// Motzkin: projects onto the equation with the largest squared residual.
StepResult motzkin_step(const LinearSystem& sys, std::span<const double> x);

/// Draws a sketch per spec, selects the sketched equation with the largest
/// squared residual and projects onto that sketched equation. A zero-norm
/// selected row triggers one resample, then a Numerical error.
StepResult sketched_motzkin_step(const LinearSystem& sys,
                                 const SketchSpec& spec,
                                 std::span<const double> x, Rng& rng,
                                 std::optional<std::size_t> fixed_block = {});

/// Runs from x0 (zero by default) until the residual or error criterion is
/// met or max_iters steps have been taken.
RunResult run(const LinearSystem& sys, const SolverConfig& cfg);

/// Per-iteration geometric mean of the error contraction,
/// (e_last / e_first)^(1 / (iter_last - iter_first)), over the records that
/// carry a positive error_sq.
double contraction_summary(const RunTrace& trace);

}  // namespace skm
