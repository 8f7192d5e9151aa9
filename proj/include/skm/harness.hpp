#pragma once

// Experiment drivers behind the CLI: multi-trial method comparison,
// block-size sweeps, diagnostics, and the CSV formats they emit.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "skm/linalg.hpp"
#include "skm/solvers.hpp"
#include "skm/system.hpp"

namespace skm {

struct Cell {
  Method method = Method::Motzkin;
  std::size_t s = 1;
};

struct ExperimentPlan {
  std::vector<Cell> cells;
  std::size_t trials = 1;
  double tol = 1e-8;
  std::size_t max_iters = 10000;
  std::optional<double> error_ratio_stop;
  std::uint64_t seed = 0;  // trial t runs with seed + t
  TraceThinning thinning;
  /// OpenMP workers over (cell, trial) runs. Output order does not depend on
  /// it.
  int workers = 1;
};

void validate(const ExperimentPlan& plan, const LinearSystem& sys);

/// Solver config for one cell and trial of a plan.
SolverConfig config_for(const ExperimentPlan& plan, const Cell& cell,
                        std::size_t trial, const LinearSystem& sys);

struct CellRun {
  Cell cell;
  std::size_t trial = 0;
  RunTrace trace;
};

/// Every cell over every trial, ordered cell-major then by trial.
std::vector<CellRun> compare(const LinearSystem& sys,
                             const ExperimentPlan& plan);

inline constexpr const char* kTraceHeader =
    "method,s,trial,iter,error_sq,residual_norm,elapsed_ns";

/// Trace rows in the kTraceHeader schema. error_sq is empty when unknown.
/// Kaczmarz and Motzkin rows report s = 0.
void write_trace_rows(std::ostream& out, const Cell& cell, std::size_t trial,
                      const RunTrace& trace);
void write_trace_csv(std::ostream& out, const std::vector<CellRun>& runs);

struct CellSummary {
  Cell cell;
  double median_iterations = 0.0;
  double median_residual = 0.0;
  double median_elapsed_ns = 0.0;
  std::optional<double> median_contraction;
  std::size_t converged = 0;
  std::size_t trials = 0;
};

std::vector<CellSummary> summarize(const std::vector<CellRun>& runs);
void print_summary(std::ostream& out, const std::vector<CellSummary>& rows);

struct SweepPoint {
  std::size_t s = 0;
  std::size_t trial = 0;
  std::optional<std::size_t> iterations;  // empty: threshold not reached
  std::optional<std::int64_t> elapsed_ns;
};

struct SweepPlan {
  Method method = Method::SGSM;
  std::vector<std::size_t> sizes;
  /// Error ratio ||x_k - x*||^2 / ||x_0 - x*||^2 when x_star is known,
  /// otherwise the relative residual tolerance.
  double threshold = 1e-6;
  std::size_t trials = 1;
  std::size_t max_iters = 100000;
  std::uint64_t seed = 0;
  int workers = 1;
};

/// Iterations and solver time to reach the threshold, per size and trial.
std::vector<SweepPoint> sweep(const LinearSystem& sys, const SweepPlan& plan);

inline constexpr const char* kSweepHeader =
    "s,trial,iters_to_threshold,time_to_threshold_ns";

/// Unreached thresholds are written as DNF.
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& pts);

struct SweepSummary {
  std::size_t s = 0;
  std::optional<double> median_iterations;  // empty when any trial is DNF
  std::optional<double> median_elapsed_ns;
};

std::vector<SweepSummary> summarize(const std::vector<SweepPoint>& pts);

struct Diagnostics {
  std::size_t rows = 0;
  std::size_t cols = 0;
  ConditionStats condition;
  std::optional<double> dynamic_range_x0;  // at x = 0, needs x_star
};

/// Throws Numerical for rank-deficient systems.
Diagnostics diagnose(const LinearSystem& sys);
void print_diagnostics(std::ostream& out, const Diagnostics& d);

/// Median of a non-empty sample (mean of the middle pair for even sizes).
double median(std::vector<double> v);

/// Shortest decimal string that reads back to exactly v.
std::string format_double(double v);

}  // namespace skm
