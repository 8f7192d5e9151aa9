#include <algorithm>
#include <sstream>
#include <string>

#include "doctest.h"
#include "skm/error.hpp"
#include "skm/harness.hpp"
#include "skm/problems.hpp"

using namespace skm;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string drop_last_field(const std::string& line) {
  return line.substr(0, line.rfind(','));
}

}  // namespace

TEST_CASE("median") {
  CHECK(median({3.0}) == 3.0);
  CHECK(median({4.0, 1.0, 3.0}) == 3.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK_THROWS_AS(median({}), Error);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("trace CSV schema") {
  const auto sys = generate_system({ModelKind::GaussianIID, 40, 5, 1});
  ExperimentPlan plan;
  plan.cells = {{Method::GSM, 4}};
  plan.max_iters = 20;
  plan.tol = 0.0;
  std::ostringstream out;
  write_trace_csv(out, compare(sys, plan));
  const auto ls = lines(out.str());
  REQUIRE(ls.size() == 22);
  CHECK(ls[0] == "method,s,trial,iter,error_sq,residual_norm,elapsed_ns");
  CHECK(ls[1].rfind("gsm,4,0,0,", 0) == 0);
  CHECK(ls[21].rfind("gsm,4,0,20,", 0) == 0);

  // No planted solution: error_sq is empty, not zero.
  const LinearSystem bare(sys.a(), sys.b());
  std::ostringstream out2;
  plan.cells = {{Method::Motzkin, 1}};
  write_trace_csv(out2, compare(bare, plan));
  const auto l2 = lines(out2.str());
  CHECK(l2[1].rfind("motzkin,0,0,0,,", 0) == 0);
}

TEST_CASE("compare: row accounting and determinism") {
  const auto sys = generate_system({ModelKind::CoherentUniform, 200, 20, 2});
  ExperimentPlan plan;
  for (Method m : kAllMethods) plan.cells.push_back({m, 10});
  plan.trials = 5;
  plan.max_iters = 50;
  plan.tol = 0.0;
  const auto runs = compare(sys, plan);
  CHECK(runs.size() == 25);
  std::ostringstream a;
  write_trace_csv(a, runs);
  const auto rows = lines(a.str());
  // Each run segment starts with its iteration-0 record.
  std::size_t segments = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream f(rows[i]);
    std::string field;
    for (int k = 0; k < 4; ++k) std::getline(f, field, ',');
    if (field == "0") ++segments;
  }
  CHECK(segments == 25);

  // Output does not depend on the worker count.
  plan.workers = 3;
  std::ostringstream b;
  write_trace_csv(b, compare(sys, plan));
  const auto rows_b = lines(b.str());
  REQUIRE(rows_b.size() == rows.size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(drop_last_field(rows[i]) == drop_last_field(rows_b[i]));
  }

  const auto summary = summarize(runs);
  REQUIRE(summary.size() == 5);
  for (const auto& r : summary) {
    CHECK(r.trials == 5);
    CHECK(r.median_iterations == 50.0);
    CHECK(r.median_contraction.has_value());
  }
}

TEST_CASE("compare propagates cell failures with context") {
  const auto sys = generate_system({ModelKind::GaussianIID, 20, 4, 3});
  ExperimentPlan plan;
  plan.cells = {{Method::SKM, 40}};
  CHECK_THROWS_AS(compare(sys, plan), Error);
  plan.cells.clear();
  CHECK_THROWS_AS(compare(sys, plan), Error);
}

TEST_CASE("sweep: full block SKM equals plain Motzkin") {
  const auto sys = generate_system({ModelKind::GaussianIID, 60, 6, 4});
  SweepPlan plan;
  plan.method = Method::SKM;
  plan.sizes = {60};
  plan.threshold = 1e-8;
  plan.trials = 2;
  const auto pts = sweep(sys, plan);
  REQUIRE(pts.size() == 2);

  SolverConfig cfg;
  cfg.method = Method::Motzkin;
  cfg.tol = 0.0;
  cfg.max_iters = plan.max_iters;
  cfg.error_ratio_stop = 1e-8;
  const auto mz = run(sys, cfg);
  for (const auto& p : pts) {
    REQUIRE(p.iterations.has_value());
    CHECK(*p.iterations == mz.trace.iterations);
  }
}

TEST_CASE("sweep: DNF and CSV") {
  const auto sys = generate_system({ModelKind::CoherentUniform, 100, 10, 5});
  SweepPlan plan;
  plan.method = Method::SGSM;
  plan.sizes = {1, 10};
  plan.threshold = 1e-12;
  plan.max_iters = 3;
  plan.trials = 2;
  const auto pts = sweep(sys, plan);
  std::ostringstream out;
  write_sweep_csv(out, pts);
  const auto ls = lines(out.str());
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "s,trial,iters_to_threshold,time_to_threshold_ns");
  CHECK(ls[1] == "1,0,DNF,DNF");
  CHECK(ls[4] == "10,1,DNF,DNF");
  const auto summary = summarize(pts);
  REQUIRE(summary.size() == 2);
  CHECK(!summary[0].median_iterations.has_value());

  plan.threshold = 0.0;
  CHECK_THROWS_AS(sweep(sys, plan), Error);
}

TEST_CASE("sweep without a planted solution uses the residual") {
  const auto g = generate_system({ModelKind::GaussianIID, 80, 8, 6});
  const LinearSystem bare(g.a(), g.b());
  SweepPlan plan;
  plan.method = Method::GSM;
  plan.sizes = {4};
  plan.threshold = 1e-6;
  plan.max_iters = 100000;
  const auto pts = sweep(bare, plan);
  REQUIRE(pts[0].iterations.has_value());
  CHECK(*pts[0].iterations > 0);
}

TEST_CASE("diagnose") {
  const LinearSystem id(DenseMatrix::identity(4), Vector{1, 2, 3, 4},
                        Vector{1, 2, 3, 4});
  const auto d = diagnose(id);
  CHECK(d.condition.kappa_tilde == doctest::Approx(4.0).epsilon(1e-12));
  REQUIRE(d.dynamic_range_x0.has_value());
  CHECK(*d.dynamic_range_x0 == doctest::Approx(30.0 / 16.0));

  const LinearSystem padded(DenseMatrix(4, 2, {2, 0, 0, 1, 0, 0, 0, 0}),
                            Vector(4, 0.0));
  const auto p = diagnose(padded);
  CHECK(p.condition.frobenius_sq == 5.0);
  CHECK(p.condition.s_min == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.condition.kappa_tilde == doctest::Approx(5.0).epsilon(1e-12));

  std::ostringstream out;
  print_diagnostics(out, p);
  CHECK(out.str().find("kappa_tilde 5") != std::string::npos);

  const LinearSystem deficient(DenseMatrix(3, 2, {1, 0, 1, 0, 1, 0}),
                               Vector(3, 0.0));
  CHECK_THROWS_AS(diagnose(deficient), Error);
}
