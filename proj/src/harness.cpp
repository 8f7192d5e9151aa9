#include "skm/harness.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "skm/error.hpp"

namespace skm {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

double median(std::vector<double> v) {
  require(!v.empty(), "median of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  if (v.size() % 2) return v[h];
  if (std::isinf(v[h])) return v[h];
  return 0.5 * (v[h - 1] + v[h]);
}

namespace {

// Runs job(i) for i in [0, count) on `workers` OpenMP threads and rethrows
// the first failure in index order.
template <typename Job>
void run_jobs(std::size_t count, int workers, Job&& job) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, workers))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      job(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::size_t reported_s(const Cell& c) { return is_sketched(c.method) ? c.s : 0; }

std::string cell_label(const Cell& c) {
  std::string label(to_string(c.method));
  if (is_sketched(c.method)) label += "(s=" + std::to_string(c.s) + ")";
  return label;
}

}  // namespace

void validate(const ExperimentPlan& plan, const LinearSystem& sys) {
  require(!plan.cells.empty(), "experiment plan has no cells");
  require(plan.trials >= 1, "experiment plan needs at least one trial");
  for (const auto& cell : plan.cells) {
    validate(config_for(plan, cell, 0, sys), sys);
  }
}

SolverConfig config_for(const ExperimentPlan& plan, const Cell& cell,
                        std::size_t trial, const LinearSystem& sys) {
  SolverConfig cfg;
  cfg.method = cell.method;
  cfg.s = cell.s;
  cfg.max_iters = plan.max_iters;
  cfg.tol = plan.tol;
  cfg.seed = plan.seed + trial;
  cfg.record_error = sys.x_star().has_value();
  cfg.error_ratio_stop = plan.error_ratio_stop;
  cfg.thinning = plan.thinning;
  return cfg;
}

std::vector<CellRun> compare(const LinearSystem& sys,
                             const ExperimentPlan& plan) {
  validate(plan, sys);
  std::vector<CellRun> runs(plan.cells.size() * plan.trials);
  run_jobs(runs.size(), plan.workers, [&](std::size_t i) {
    const Cell& cell = plan.cells[i / plan.trials];
    const std::size_t trial = i % plan.trials;
    try {
      runs[i] = {cell, trial,
                 run(sys, config_for(plan, cell, trial, sys)).trace};
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << cell_label(cell) << " trial " << trial << ": " << e.what();
      throw Error(e.kind(), msg.str());
    }
  });
  return runs;
}

void write_trace_rows(std::ostream& out, const Cell& cell, std::size_t trial,
                      const RunTrace& trace) {
  const auto method = to_string(cell.method);
  const std::size_t s = reported_s(cell);
  for (const auto& r : trace.records) {
    out << method << ',' << s << ',' << trial << ',' << r.iter << ',';
    if (r.error_sq) out << format_double(*r.error_sq);
    out << ',' << format_double(r.residual_norm) << ',' << r.elapsed_ns
        << '\n';
  }
}

void write_trace_csv(std::ostream& out, const std::vector<CellRun>& runs) {
  out << kTraceHeader << '\n';
  for (const auto& r : runs) write_trace_rows(out, r.cell, r.trial, r.trace);
}

std::vector<CellSummary> summarize(const std::vector<CellRun>& runs) {
  std::vector<CellSummary> out;
  std::size_t i = 0;
  while (i < runs.size()) {
    std::size_t j = i;
    std::vector<double> iters, resid, elapsed, contraction;
    CellSummary row;
    row.cell = runs[i].cell;
    // A new cell starts at each trial 0.
    while (j < runs.size() && (j == i || runs[j].trial != 0)) {
      const auto& t = runs[j].trace;
      iters.push_back(static_cast<double>(t.iterations));
      resid.push_back(t.records.back().residual_norm);
      elapsed.push_back(static_cast<double>(t.records.back().elapsed_ns));
      if (t.records.size() >= 2 && t.records.front().error_sq &&
          *t.records.front().error_sq > 0.0) {
        contraction.push_back(contraction_summary(t));
      }
      if (t.status == RunStatus::Converged) ++row.converged;
      ++j;
    }
    row.trials = j - i;
    row.median_iterations = median(iters);
    row.median_residual = median(resid);
    row.median_elapsed_ns = median(elapsed);
    if (contraction.size() == row.trials) {
      row.median_contraction = median(contraction);
    }
    out.push_back(row);
    i = j;
  }
  return out;
}

void print_summary(std::ostream& out, const std::vector<CellSummary>& rows) {
  out << std::left << std::setw(14) << "method" << std::right
      << std::setw(10) << "converged" << std::setw(14) << "median_iters"
      << std::setw(16) << "median_resid" << std::setw(14) << "median_ms"
      << std::setw(14) << "contraction" << '\n';
  for (const auto& r : rows) {
    std::ostringstream conv;
    conv << r.converged << '/' << r.trials;
    out << std::left << std::setw(14) << cell_label(r.cell) << std::right
        << std::setw(10) << conv.str() << std::setw(14)
        << r.median_iterations << std::setw(16) << std::setprecision(6)
        << r.median_residual << std::setw(14) << r.median_elapsed_ns * 1e-6
        << std::setw(14);
    if (r.median_contraction) {
      out << std::setprecision(8) << *r.median_contraction;
    } else {
      out << "-";
    }
    out << '\n';
  }
}

std::vector<SweepPoint> sweep(const LinearSystem& sys, const SweepPlan& plan) {
  require(!plan.sizes.empty(), "sweep needs at least one sketch size");
  require(plan.trials >= 1, "sweep needs at least one trial");
  require(plan.threshold > 0.0, "sweep threshold must be > 0");
  const bool by_error = sys.x_star().has_value();

  auto config = [&](std::size_t s, std::size_t trial) {
    SolverConfig cfg;
    cfg.method = plan.method;
    cfg.s = s;
    cfg.max_iters = plan.max_iters;
    cfg.seed = plan.seed + trial;
    if (by_error) {
      cfg.tol = 0.0;
      cfg.error_ratio_stop = plan.threshold;
      // Only the endpoints are needed; the error test runs every iteration.
      cfg.thinning = {0, std::numeric_limits<std::size_t>::max()};
    } else {
      cfg.tol = plan.threshold;
      cfg.thinning = {std::numeric_limits<std::size_t>::max(), 1};
    }
    return cfg;
  };
  for (std::size_t s : plan.sizes) validate(config(s, 0), sys);

  std::vector<SweepPoint> pts(plan.sizes.size() * plan.trials);
  run_jobs(pts.size(), plan.workers, [&](std::size_t i) {
    const std::size_t s = plan.sizes[i / plan.trials];
    const std::size_t trial = i % plan.trials;
    const auto res = run(sys, config(s, trial));
    SweepPoint p{s, trial, std::nullopt, std::nullopt};
    if (res.trace.status == RunStatus::Converged) {
      p.iterations = res.trace.iterations;
      p.elapsed_ns = res.trace.records.back().elapsed_ns;
    }
    pts[i] = p;
  });
  return pts;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& pts) {
  out << kSweepHeader << '\n';
  for (const auto& p : pts) {
    out << p.s << ',' << p.trial << ',';
    if (p.iterations) {
      out << *p.iterations << ',' << *p.elapsed_ns;
    } else {
      out << "DNF,DNF";
    }
    out << '\n';
  }
}

std::vector<SweepSummary> summarize(const std::vector<SweepPoint>& pts) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<SweepSummary> out;
  std::size_t i = 0;
  while (i < pts.size()) {
    std::vector<double> iters, times;
    std::size_t j = i;
    for (; j < pts.size() && pts[j].s == pts[i].s; ++j) {
      iters.push_back(pts[j].iterations
                          ? static_cast<double>(*pts[j].iterations)
                          : inf);
      times.push_back(pts[j].elapsed_ns
                          ? static_cast<double>(*pts[j].elapsed_ns)
                          : inf);
    }
    SweepSummary row{pts[i].s, median(iters), median(times)};
    if (std::isinf(*row.median_iterations)) row.median_iterations.reset();
    if (std::isinf(*row.median_elapsed_ns)) row.median_elapsed_ns.reset();
    out.push_back(row);
    i = j;
  }
  return out;
}

Diagnostics diagnose(const LinearSystem& sys) {
  Diagnostics d;
  d.rows = sys.rows();
  d.cols = sys.cols();
  d.condition = condition_kappa_tilde(sys.a());
  if (sys.x_star() && norm_sq(sys.b()) > 0.0) {
    d.dynamic_range_x0 =
        dynamic_range(sys.a(), Vector(sys.cols(), 0.0), *sys.x_star());
  }
  return d;
}

void print_diagnostics(std::ostream& out, const Diagnostics& d) {
  out << "rows " << d.rows << '\n'
      << "cols " << d.cols << '\n'
      << "frobenius_sq " << format_double(d.condition.frobenius_sq) << '\n'
      << "s_min " << format_double(d.condition.s_min) << '\n'
      << "kappa_tilde " << format_double(d.condition.kappa_tilde) << '\n';
  if (d.dynamic_range_x0) {
    out << "dynamic_range_x0 " << format_double(*d.dynamic_range_x0) << '\n';
  }
}

}  // namespace skm
