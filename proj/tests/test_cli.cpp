#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "prol/cli.hpp"
#include "prol/errors.hpp"

using namespace prol;

namespace {

JobSpec paper_spec(std::vector<int> N, int n_max) {
  JobSpec s;
  s.p = 1;
  s.c = 20.0 * std::numbers::pi;
  s.N_list = std::move(N);
  s.n_max = n_max;
  return s;
}

const CheckResult* find_check(const VerifyReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("job validation") {
  JobSpec s;
  CHECK_NOTHROW(s.validate());
  s.grid_points = 1;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s = JobSpec{};
  s.N_list.clear();
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s = JobSpec{};
  s.n_max = -1;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s = JobSpec{};
  s.c = -3;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s = JobSpec{};
  s.p = -1;
  CHECK_THROWS_AS(s.validate(), ParameterError);
}

TEST_CASE("eigensystem file at figure scale") {
  const auto spec = paper_spec({0}, 40);
  const auto file = eigensystem_file(spec, solve_orders(spec));
  REQUIRE(file.records.size() == 41);
  for (const auto& r : file.records) {
    double ss = 0.0;
    for (double h : r.coeffs) ss += h * h;
    CHECK(std::abs(std::sqrt(ss) - 1.0) <= 1e-14);
    CHECK(r.coeffs.size() == r.K);
  }
  CHECK(file.records[1].coeffs[0] < 0.0);
  CHECK(file.version == PROL_VERSION);
}

TEST_CASE("output is deterministic and independent of thread count") {
  auto spec = paper_spec({3, 0, 2, 1}, 12);
  setenv("PROL_NUM_THREADS", "1", 1);
  const auto serial = to_json(eigensystem_file(spec, solve_orders(spec)));
  setenv("PROL_NUM_THREADS", "4", 1);
  CHECK(thread_limit() == 4);
  const auto parallel = to_json(eigensystem_file(spec, solve_orders(spec)));
  const auto again = to_json(eigensystem_file(spec, solve_orders(spec)));
  unsetenv("PROL_NUM_THREADS");
  CHECK(serial == parallel);
  CHECK(parallel == again);
  const auto sols = solve_orders(spec);
  for (std::size_t i = 0; i < sols.size(); ++i) CHECK(sols[i].params.N == spec.N_list[i]);
}

TEST_CASE("eval tables") {
  auto spec = paper_spec({0, 1}, 5);
  spec.grid_points = 2;
  const auto sols = solve_orders(spec);
  const auto t = eval_table(spec, sols, EvalKind::radial);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.columns.size() == 2 + 6);
  CHECK(t.rows[0][1] == 0.0);
  CHECK(t.rows[1][1] == 1.0);

  spec.grid_points = 33;
  const auto radial = eval_table(spec, sols, EvalKind::radial);
  const auto weighted = eval_table(spec, sols, EvalKind::weighted);
  for (std::size_t i = 0; i < radial.rows.size(); ++i) {
    const double x = radial.rows[i][1];
    for (std::size_t j = 2; j < radial.rows[i].size(); ++j)
      CHECK(std::abs(weighted.rows[i][j] - x * radial.rows[i][j]) <= 1e-13 * std::max(1.0, std::abs(weighted.rows[i][j])));
  }
}

TEST_CASE("eigen table") {
  const auto t = eigen_table(solve_orders(paper_spec({0, 1, 2, 3}, 60)));
  REQUIRE(t.rows.size() == 4 * 61);
  for (const auto& row : t.rows) {
    CHECK(row[6] >= 0.0);
    CHECK(row[6] <= 1.0 + 1e-10);
  }
  CHECK(t.rows[0][7] <= 1e-8);
}

TEST_CASE("verification passes by default") {
  const auto report = run_verification(paper_spec({0, 1}, 10));
  CHECK(report.all_pass());
  CHECK(report.checks.size() == 5);
  std::ostringstream out;
  CHECK(cmd_verify(paper_spec({0, 1}, 10), out) == 0);
  CHECK(out.str().find("all checks passed") != std::string::npos);
}

TEST_CASE("verification detects an injected fault") {
  auto spec = paper_spec({0, 1}, 10);
  spec.inject_fault = true;
  const auto report = run_verification(spec);
  CHECK_FALSE(report.all_pass());
  const auto* c = find_check(report, "integral_residual");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->pass);
  CHECK(c->value > 1e-6);
  std::ostringstream out;
  CHECK(cmd_verify(spec, out) != 0);
  CHECK(out.str().find("integral_residual") != std::string::npos);
}

TEST_CASE("verification in the small c regime") {
  auto spec = paper_spec({0, 1}, 4);
  spec.c = 1e-3;
  const auto report = run_verification(spec);
  const auto* c = find_check(report, "small_c_gamma");
  REQUIRE(c != nullptr);
  CHECK(c->pass);
  CHECK(report.all_pass());
  CHECK(small_c_gamma(1, 0, 1e-3) == doctest::Approx(2e-3 / (3 * std::sqrt(2 * std::numbers::pi))).epsilon(1e-14));
}
