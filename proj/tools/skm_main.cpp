// skm: command-line front end for the sketched Motzkin solvers.
//
//   skm generate --model gaussian --rows 1000 --cols 50 --seed 1 --out g.sys
//   skm solve    --system g.sys --method gsm --s 25 --trace trace.csv
//   skm compare  --model coherent --rows 1000 --cols 50 --trials 5 --out cmp.csv
//   skm sweep    --model coherent --rows 1000 --cols 100 --sizes 1,5,20,100
//   skm diagnose --system g.sys
//
// Exit codes: 0 ok, 2 usage, 3 data/format, 4 numerical, 5 I/O.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skm/error.hpp"
#include "skm/harness.hpp"
#include "skm/problems.hpp"
#include "skm/solvers.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4, kIo = 5 };

int exit_code(skm::ErrorKind kind) {
  switch (kind) {
    case skm::ErrorKind::InvalidArgument: return kUsage;
    case skm::ErrorKind::Format: return kData;
    case skm::ErrorKind::Numerical: return kNumerical;
    case skm::ErrorKind::Io: return kIo;
  }
  return kUsage;
}

// Where the linear system comes from: a binary system file, a CSV matrix, or
// a synthetic model.
struct SourceOptions {
  std::string system;
  std::string csv;
  char delimiter = ',';
  std::size_t skip_rows = 0;
  std::optional<std::size_t> target_column;
  std::uint64_t plant_seed = 0;
  std::string model;
  std::size_t rows = 1000;
  std::size_t cols = 50;
  std::uint64_t model_seed = 1;
};

void add_source_options(CLI::App& cmd, SourceOptions& src) {
  auto* sys = cmd.add_option("--system", src.system, "Binary system file");
  auto* csv = cmd.add_option("--csv", src.csv, "CSV matrix file");
  auto* model = cmd.add_option("--model", src.model,
                               "Synthetic model: gaussian or coherent");
  sys->excludes(csv)->excludes(model);
  csv->excludes(model);
  cmd.add_option("--delimiter", src.delimiter, "CSV field delimiter");
  cmd.add_option("--skip-rows", src.skip_rows, "CSV header rows to skip");
  cmd.add_option("--target-column", src.target_column,
                 "CSV column (0-based) used as b instead of planting");
  cmd.add_option("--plant-seed", src.plant_seed,
                 "Seed for the planted solution of CSV input");
  cmd.add_option("--rows", src.rows, "Model rows")->check(CLI::PositiveNumber);
  cmd.add_option("--cols", src.cols, "Model columns")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--model-seed", src.model_seed, "Model seed");
}

skm::LinearSystem load_source(const SourceOptions& src) {
  if (!src.system.empty()) return skm::load_system(src.system);
  if (!src.csv.empty()) {
    skm::CsvOptions opts;
    opts.delimiter = src.delimiter;
    opts.skip_rows = src.skip_rows;
    opts.target_column = src.target_column;
    opts.plant_seed = src.plant_seed;
    auto sys = skm::load_csv_system(src.csv, opts);
    if (src.target_column) {
      std::cerr << "warning: b taken from a data column; the system may be "
                   "inconsistent and no planted solution is available\n";
    }
    return sys;
  }
  if (!src.model.empty()) {
    return skm::generate_system(
        {skm::parse_model(src.model), src.rows, src.cols, src.model_seed});
  }
  skm::fail(skm::ErrorKind::InvalidArgument,
            "no system given: use --system, --csv or --model");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) skm::fail(skm::ErrorKind::Io, "cannot write " + path);
  return out;
}

void close_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) skm::fail(skm::ErrorKind::Io, "write failed for " + path);
}

int workers_from_env() {
  if (const char* env = std::getenv("SKM_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return 1;
}

std::vector<skm::Cell> build_cells(const std::vector<std::string>& methods,
                                   const std::vector<std::size_t>& sizes) {
  std::vector<skm::Cell> cells;
  for (const auto& name : methods) {
    const skm::Method m = skm::parse_method(name);
    if (!skm::is_sketched(m)) {
      cells.push_back({m, 1});
      continue;
    }
    for (std::size_t s : sizes) cells.push_back({m, s});
  }
  return cells;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kaczmarz, Motzkin and sketched Motzkin solvers for Ax = b"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key-value file of flags");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic system file");
  std::string gen_model = "gaussian";
  std::size_t gen_rows = 1000, gen_cols = 50;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--model", gen_model, "gaussian or coherent");
  gen->add_option("--rows", gen_rows, "Rows m")->check(CLI::PositiveNumber);
  gen->add_option("--cols", gen_cols, "Columns n")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--out", gen_out, "Output system file")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Run one solver and trace it");
  SourceOptions solve_src;
  add_source_options(*solve, solve_src);
  std::string solve_method = "motzkin";
  skm::SolverConfig solve_cfg;
  std::string solve_trace;
  solve->add_option("--method", solve_method,
                    "kaczmarz, motzkin, skm, gsm or sgsm");
  solve->add_option("--s", solve_cfg.s, "Sketch size");
  solve->add_option("--tol", solve_cfg.tol, "Relative residual tolerance");
  solve->add_option("--max-iters", solve_cfg.max_iters, "Iteration cap");
  solve->add_option("--seed", solve_cfg.seed, "Solver seed");
  solve->add_option("--fixed-block", solve_cfg.fixed_block,
                    "sgsm: pin the sketched block index");
  solve->add_option("--error-ratio", solve_cfg.error_ratio_stop,
                    "Also stop at ||x-x*||^2 <= ratio * initial");
  solve->add_option("--trace", solve_trace, "Trace CSV output");

  // compare
  auto* cmp = app.add_subcommand("compare", "Compare methods over trials");
  SourceOptions cmp_src;
  add_source_options(*cmp, cmp_src);
  std::vector<std::string> cmp_methods = {"kaczmarz", "motzkin", "skm", "gsm",
                                          "sgsm"};
  std::vector<std::size_t> cmp_sizes = {25};
  skm::ExperimentPlan plan;
  std::string cmp_out;
  cmp->add_option("--methods", cmp_methods, "Methods to run")->delimiter(',');
  cmp->add_option("--s", cmp_sizes, "Sketch sizes for sketched methods")
      ->delimiter(',');
  cmp->add_option("--trials", plan.trials, "Trials per cell");
  cmp->add_option("--tol", plan.tol, "Relative residual tolerance");
  cmp->add_option("--max-iters", plan.max_iters, "Iteration cap");
  cmp->add_option("--seed", plan.seed, "Base seed (trial t uses seed + t)");
  cmp->add_option("--error-ratio", plan.error_ratio_stop,
                  "Also stop at ||x-x*||^2 <= ratio * initial");
  cmp->add_option("--out", cmp_out, "Combined trace CSV")->required();

  // sweep
  auto* swp = app.add_subcommand("sweep", "Time and iterations vs sketch size");
  SourceOptions swp_src;
  add_source_options(*swp, swp_src);
  skm::SweepPlan sweep_plan;
  std::string swp_method = "sgsm";
  std::string swp_out;
  swp->add_option("--method", swp_method, "skm, gsm or sgsm");
  swp->add_option("--sizes", sweep_plan.sizes, "Sketch sizes")
      ->delimiter(',')
      ->required();
  swp->add_option("--threshold", sweep_plan.threshold,
                  "Error ratio (or residual tolerance without x*)");
  swp->add_option("--trials", sweep_plan.trials, "Trials per size");
  swp->add_option("--max-iters", sweep_plan.max_iters, "Iteration cap");
  swp->add_option("--seed", sweep_plan.seed, "Base seed");
  swp->add_option("--out", swp_out, "Sweep CSV")->required();

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "Print conditioning diagnostics");
  SourceOptions diag_src;
  add_source_options(*diag, diag_src);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) {
      const auto sys = skm::generate_system(
          {skm::parse_model(gen_model), gen_rows, gen_cols, gen_seed});
      skm::save_system(sys, gen_out);
      std::cout << "wrote " << gen_out << " (" << sys.rows() << "x"
                << sys.cols() << ")\n";
      const auto stats = skm::condition_kappa_tilde(sys.a());
      std::cout << "kappa_tilde " << skm::format_double(stats.kappa_tilde)
                << '\n';
    } else if (*solve) {
      const auto sys = load_source(solve_src);
      solve_cfg.method = skm::parse_method(solve_method);
      solve_cfg.record_error = sys.x_star().has_value();
      const auto res = skm::run(sys, solve_cfg);
      if (!solve_trace.empty()) {
        auto out = open_output(solve_trace);
        out << skm::kTraceHeader << '\n';
        skm::write_trace_rows(out, {solve_cfg.method, solve_cfg.s}, 0,
                              res.trace);
        close_output(out, solve_trace);
      }
      const auto& last = res.trace.records.back();
      std::cout << "status " << skm::to_string(res.trace.status)
                << " iterations " << res.trace.iterations << " residual "
                << skm::format_double(last.residual_norm) << " elapsed_ms "
                << static_cast<double>(last.elapsed_ns) * 1e-6;
      if (last.error_sq && res.trace.records.size() >= 2 &&
          *res.trace.records.front().error_sq > 0.0) {
        std::cout << " contraction "
                  << skm::contraction_summary(res.trace);
      }
      std::cout << '\n';
    } else if (*cmp) {
      const auto sys = load_source(cmp_src);
      plan.cells = build_cells(cmp_methods, cmp_sizes);
      plan.workers = workers_from_env();
      const auto runs = skm::compare(sys, plan);
      auto out = open_output(cmp_out);
      skm::write_trace_csv(out, runs);
      close_output(out, cmp_out);
      skm::print_summary(std::cout, skm::summarize(runs));
    } else if (*swp) {
      const auto sys = load_source(swp_src);
      sweep_plan.method = skm::parse_method(swp_method);
      sweep_plan.workers = workers_from_env();
      const auto pts = skm::sweep(sys, sweep_plan);
      auto out = open_output(swp_out);
      skm::write_sweep_csv(out, pts);
      close_output(out, swp_out);
      std::cout << "s median_iters median_ms\n";
      for (const auto& row : skm::summarize(pts)) {
        std::cout << row.s << ' ';
        if (row.median_iterations) {
          std::cout << *row.median_iterations << ' '
                    << *row.median_elapsed_ns * 1e-6 << '\n';
        } else {
          std::cout << "DNF DNF\n";
        }
      }
    } else if (*diag) {
      const auto sys = load_source(diag_src);
      skm::print_diagnostics(std::cout, skm::diagnose(sys));
    }
  } catch (const skm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}
