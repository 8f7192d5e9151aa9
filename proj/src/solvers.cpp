#include "skm/solvers.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <sstream>
#include <string>

#include "skm/error.hpp"
#include "skm/kernels.hpp"

namespace skm {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Kaczmarz: return "kaczmarz";
    case Method::Motzkin: return "motzkin";
    case Method::SKM: return "skm";
    case Method::GSM: return "gsm";
    case Method::SGSM: return "sgsm";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (Method m : kAllMethods) {
    if (lower == to_string(m)) return m;
  }
  fail(ErrorKind::InvalidArgument, "unknown method '" + std::string(name) +
                                       "' (expected kaczmarz, motzkin, skm, "
                                       "gsm or sgsm)");
}

bool is_sketched(Method m) {
  return m == Method::SKM || m == Method::GSM || m == Method::SGSM;
}

SketchSpec sketch_spec(Method m, std::size_t s) {
  switch (m) {
    case Method::SKM: return {SketchKind::Block, s};
    case Method::GSM: return {SketchKind::Gaussian, s};
    case Method::SGSM: return {SketchKind::SparseGaussian, s};
    default: break;
  }
  fail(ErrorKind::InvalidArgument,
       std::string(to_string(m)) + " does not use a sketch");
}

std::string_view to_string(RunStatus st) {
  return st == RunStatus::Converged ? "converged" : "max-iters";
}

void validate(const SolverConfig& cfg, const LinearSystem& sys) {
  require(cfg.max_iters >= 1, "max_iters must be >= 1");
  require(std::isfinite(cfg.tol) && cfg.tol >= 0.0, "tol must be >= 0");
  require(cfg.thinning.stride >= 1, "trace stride must be >= 1");
  if (is_sketched(cfg.method)) {
    validate(sketch_spec(cfg.method, cfg.s), sys.rows());
  }
  if (cfg.fixed_block) {
    require(cfg.method == Method::SGSM, "fixed_block applies to sgsm only");
    require(*cfg.fixed_block < block_count(sys.rows(), cfg.s),
            "fixed_block out of range");
  }
  if (cfg.record_error) {
    require(sys.x_star().has_value(),
            "error recording requires a planted solution");
  }
  if (cfg.error_ratio_stop) {
    require(sys.x_star().has_value(),
            "error-based stopping requires a planted solution");
    require(*cfg.error_ratio_stop > 0.0, "error ratio threshold must be > 0");
  }
  if (cfg.x0) {
    require(cfg.x0->size() == sys.cols(), "x0 length does not match columns");
    check_finite(*cfg.x0, "x0");
  }
}

namespace {

kernels::MatrixView view(const DenseMatrix& a) {
  return {a.data().data(), a.rows(), a.cols()};
}

bool is_zero_row(double row_sq, std::span<const double> x) {
  return row_sq <= 1e-14 * std::max(1.0, norm_sq(x));
}

[[noreturn]] void zero_row_failure(std::size_t i, double row_sq) {
  std::ostringstream msg;
  msg << "projection onto a zero-norm row (index " << i
      << ", ||a||^2 = " << row_sq << ")";
  fail(ErrorKind::Numerical, msg.str());
}

// x <- x + (beta - <a, x>) / ||a||^2 * a
void project_in_place(std::span<double> x, std::span<const double> a,
                      double beta, double row_sq) {
  const double scale = (beta - dot(a, x)) / row_sq;
  for (std::size_t k = 0; k < x.size(); ++k) x[k] += scale * a[k];
}

// Motzkin selection and projection on (m, r). Returns false, leaving x
// untouched, when the selected row has zero norm but nonzero residual.
struct Selection {
  std::size_t index;
  double residual_sq;
  bool projected;
};

Selection motzkin_in_place(const DenseMatrix& m, std::span<const double> r,
                           std::span<double> x) {
  const auto best = kernels::max_residual(view(m), r, x);
  if (best.value == 0.0) return {best.index, 0.0, true};
  const auto row = m.row(best.index);
  const double row_sq = norm_sq(row);
  if (is_zero_row(row_sq, x)) return {best.index, best.value, false};
  project_in_place(x, row, r[best.index], row_sq);
  return {best.index, best.value, true};
}

std::size_t kaczmarz_in_place(const LinearSystem& sys, std::span<double> x,
                              Rng& rng, WeightedSampler& sampler) {
  const std::size_t i = sampler(rng);
  const auto row = sys.a().row(i);
  const double row_sq = norm_sq(row);
  if (is_zero_row(row_sq, x)) zero_row_failure(i, row_sq);
  project_in_place(x, row, sys.b()[i], row_sq);
  return i;
}

std::vector<double> row_weights(const DenseMatrix& a) {
  std::vector<double> w(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) w[i] = norm_sq(a.row(i));
  return w;
}

// One sketched step with the zero-row policy: resample once, then fail.
Selection sketched_in_place(const LinearSystem& sys, const SketchSpec& spec,
                            std::span<double> x, Rng& rng,
                            std::optional<std::size_t> fixed_block,
                            std::optional<SketchedSystem>* keep) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto sk = draw_sketch(sys, spec, rng, fixed_block);
    const auto sel = motzkin_in_place(sk.rows, sk.rhs, x);
    if (sel.projected) {
      if (keep) *keep = std::move(sk);
      return sel;
    }
    if (attempt == 1) {
      zero_row_failure(sel.index, norm_sq(sk.rows.row(sel.index)));
    }
  }
  return {};  // unreachable
}

}  // namespace

Vector project_row(std::span<const double> x, std::span<const double> a,
                   double beta) {
  require(a.size() == x.size(), "project_row: dimension mismatch");
  const double row_sq = norm_sq(a);
  if (is_zero_row(row_sq, x)) zero_row_failure(0, row_sq);
  Vector out(x.begin(), x.end());
  project_in_place(out, a, beta, row_sq);
  return out;
}

std::size_t select_max_residual(const DenseMatrix& m,
                                std::span<const double> r,
                                std::span<const double> x) {
  require(r.size() == m.rows() && x.size() == m.cols(),
          "select_max_residual: dimension mismatch");
  return kernels::max_residual(view(m), r, x).index;
}

StepResult project_onto_equation(const LinearSystem& sys,
                                 std::span<const double> x, std::size_t i) {
  const double rowsq = row_norm_sq(sys.a(), i);
  require(x.size() == sys.cols(), "iterate length does not match columns");
  const double res = dot(sys.a().row(i), x) - sys.b()[i];
  StepResult out{Vector(x.begin(), x.end()), i, res * res, std::nullopt};
  if (is_zero_row(rowsq, x)) zero_row_failure(i, rowsq);
  project_in_place(out.x, sys.a().row(i), sys.b()[i], rowsq);
  return out;
}

StepResult kaczmarz_step(const LinearSystem& sys, std::span<const double> x,
                         Rng& rng) {
  require(x.size() == sys.cols(), "iterate length does not match columns");
  WeightedSampler sampler(row_weights(sys.a()));
  StepResult out{Vector(x.begin(), x.end()), 0, 0.0, std::nullopt};
  out.chosen = kaczmarz_in_place(sys, out.x, rng, sampler);
  const double res = dot(sys.a().row(out.chosen), x) - sys.b()[out.chosen];
  out.residual_sq = res * res;
  return out;
}

StepResult motzkin_step(const LinearSystem& sys, std::span<const double> x) {
  require(x.size() == sys.cols(), "iterate length does not match columns");
  StepResult out{Vector(x.begin(), x.end()), 0, 0.0, std::nullopt};
  const auto sel = motzkin_in_place(sys.a(), sys.b(), out.x);
  if (!sel.projected) {
    zero_row_failure(sel.index, norm_sq(sys.a().row(sel.index)));
  }
  out.chosen = sel.index;
  out.residual_sq = sel.residual_sq;
  return out;
}

StepResult sketched_motzkin_step(const LinearSystem& sys,
                                 const SketchSpec& spec,
                                 std::span<const double> x, Rng& rng,
                                 std::optional<std::size_t> fixed_block) {
  require(x.size() == sys.cols(), "iterate length does not match columns");
  validate(spec, sys.rows());
  StepResult out{Vector(x.begin(), x.end()), 0, 0.0, std::nullopt};
  const auto sel =
      sketched_in_place(sys, spec, out.x, rng, fixed_block, &out.sketch);
  out.chosen = sel.index;
  out.residual_sq = sel.residual_sq;
  return out;
}

RunResult run(const LinearSystem& sys, const SolverConfig& cfg) {
  validate(cfg, sys);
  using clock = std::chrono::steady_clock;

  Rng rng(cfg.seed);
  std::optional<WeightedSampler> sampler;
  if (cfg.method == Method::Kaczmarz) sampler.emplace(row_weights(sys.a()));
  std::optional<SketchSpec> spec;
  if (is_sketched(cfg.method)) spec = sketch_spec(cfg.method, cfg.s);

  RunResult result{cfg.x0 ? *cfg.x0 : Vector(sys.cols(), 0.0), {}};
  Vector& x = result.x;
  RunTrace& trace = result.trace;

  const bool track_error = cfg.record_error || cfg.error_ratio_stop;
  const double threshold = cfg.tol * (1.0 + norm(sys.b()));
  auto error_sq = [&] { return distance_sq(x, *sys.x_star()); };
  const double initial_error = track_error ? error_sq() : 0.0;
  const double error_stop =
      cfg.error_ratio_stop ? *cfg.error_ratio_stop * initial_error : -1.0;

  std::int64_t elapsed = 0;
  // Records iteration `iter` and reports whether the residual test passed.
  auto record = [&](std::size_t iter, std::optional<double> err) {
    TraceRecord rec;
    rec.iter = iter;
    if (cfg.record_error) rec.error_sq = err ? *err : error_sq();
    rec.residual_norm = norm(residual(sys.a(), x, sys.b()));
    rec.elapsed_ns = elapsed;
    trace.records.push_back(rec);
    return rec.residual_norm <= threshold;
  };

  if (record(0, initial_error) ||
      (cfg.error_ratio_stop && initial_error <= error_stop)) {
    trace.status = RunStatus::Converged;
    return result;
  }

  for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
    const auto t0 = clock::now();
    try {
      switch (cfg.method) {
        case Method::Kaczmarz:
          kaczmarz_in_place(sys, x, rng, *sampler);
          break;
        case Method::Motzkin: {
          const auto sel = motzkin_in_place(sys.a(), sys.b(), x);
          if (!sel.projected) {
            zero_row_failure(sel.index, norm_sq(sys.a().row(sel.index)));
          }
          break;
        }
        default:
          sketched_in_place(sys, *spec, x, rng, cfg.fixed_block, nullptr);
          break;
      }
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "iteration " << k << ": " << e.what();
      throw Error(e.kind(), msg.str());
    }
    elapsed += std::chrono::duration_cast<std::chrono::nanoseconds>(
                   clock::now() - t0)
                   .count();
    trace.iterations = k;

    std::optional<double> err;
    if (track_error) err = error_sq();
    const bool error_done = err && *err <= error_stop;
    const bool last = k == cfg.max_iters || error_done;
    if (last || cfg.thinning.keeps(k)) {
      if (record(k, err) || error_done) {
        trace.status = RunStatus::Converged;
        return result;
      }
    }
  }
  trace.status = RunStatus::MaxIters;
  return result;
}

double contraction_summary(const RunTrace& trace) {
  std::vector<const TraceRecord*> with_error;
  for (const auto& r : trace.records) {
    if (r.error_sq) with_error.push_back(&r);
  }
  require(with_error.size() >= 2,
          "contraction summary needs at least two records with error_sq");
  const auto* first = with_error.front();
  require(*first->error_sq > 0.0,
          "contraction summary needs a positive initial error");
  const auto* last = with_error.back();
  if (*last->error_sq == 0.0) return 0.0;
  const double steps = static_cast<double>(last->iter - first->iter);
  return std::exp((std::log(*last->error_sq) - std::log(*first->error_sq)) /
                  steps);
}

}  // namespace skm
