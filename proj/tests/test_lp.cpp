#include <doctest.h>

#include <cmath>

#include "momentcone/errors.hpp"
#include "momentcone/lp.hpp"

using namespace mcone;

namespace {

void check_kkt(const LinearProgram& lp, const LpSolution& s) {
  CHECK(s.max_violation <= 1e-7);
  CHECK(s.duality_gap <= 1e-7 * (1.0 + std::abs(s.objective)));
  for (double d : s.ge_duals) CHECK(d >= -1e-9);
}

}  // namespace

TEST_SUITE("lp") {

TEST_CASE("simple inequality program") {
  LinearProgram lp(2);
  lp.objective = {-1.0, -1.0};
  lp.add_ge({-1.0, -1.0}, -1.0);  // x + y <= 1
  lp.lower = {0.0, 0.0};
  LpSolution s = solve(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(s.x[0] + s.x[1] == doctest::Approx(1.0).epsilon(1e-9));
  check_kkt(lp, s);
}

TEST_CASE("equality constraints and duals") {
  LinearProgram lp(2);
  lp.objective = {2.0, 3.0};
  lp.add_eq({1.0, 1.0}, 1.0);
  lp.add_ge({1.0, -1.0}, -0.2);
  lp.lower = {0.0, 0.0};
  LpSolution s = solve(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(s.x[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(s.x[1] == doctest::Approx(0.0).epsilon(1e-8));
  // marginal value of the mass constraint
  REQUIRE(s.eq_duals.size() == 1);
  CHECK(s.eq_duals[0] == doctest::Approx(2.0).epsilon(1e-8));
  REQUIRE(s.ge_duals.size() == 1);
  CHECK(s.ge_duals[0] == doctest::Approx(0.0).epsilon(1e-8));
  check_kkt(lp, s);
}

TEST_CASE("degenerate pivoting (classic stalling example)") {
  // Known optimum -0.05 at (0.04, 0, 1, 0); plain steepest-descent pricing
  // cycles on this one without an anti-cycling fallback.
  LinearProgram lp(4);
  lp.objective = {-0.75, 150.0, -0.02, 6.0};
  lp.add_ge({-0.25, 60.0, 0.04, -9.0}, 0.0);
  lp.add_ge({-0.5, 90.0, 0.02, -3.0}, 0.0);
  lp.lower = {0.0, 0.0, 0.0, 0.0};
  lp.upper[2] = 1.0;
  LpSolution s = solve(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-0.05).epsilon(1e-9));
  CHECK(s.x[0] == doctest::Approx(0.04).epsilon(1e-7));
  CHECK(s.x[2] == doctest::Approx(1.0).epsilon(1e-9));
  check_kkt(lp, s);
}

TEST_CASE("free variables") {
  LinearProgram lp(2);
  lp.objective = {1.0, 1.0};
  lp.add_eq({1.0, -1.0}, 3.0);
  lp.add_ge({1.0, 1.0}, 1.0);
  LpSolution s = solve(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.x[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(s.x[1] == doctest::Approx(-1.0).epsilon(1e-8));
  check_kkt(lp, s);
}

TEST_CASE("two-sided bounds") {
  LinearProgram lp(1);
  lp.objective = {-1.0};
  lp.lower = {-1.0};
  lp.upper = {2.5};
  LpSolution s = solve(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-2.5).epsilon(1e-9));
  CHECK(s.x[0] == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("infeasible and unbounded detection") {
  LinearProgram inf(1);
  inf.add_eq({1.0}, 2.0);
  inf.lower = {0.0};
  inf.upper = {1.0};
  CHECK(solve(inf).status == LpStatus::Infeasible);

  LinearProgram unb(1);
  unb.objective = {-1.0};
  unb.lower = {0.0};
  CHECK(solve(unb).status == LpStatus::Unbounded);
}

TEST_CASE("row length validation") {
  LinearProgram lp(2);
  CHECK_THROWS_AS(lp.add_eq({1.0}, 0.0), InvalidInput);
  CHECK_THROWS_AS(lp.add_ge({1.0, 2.0, 3.0}, 0.0), InvalidInput);
}

TEST_CASE("deterministic pivot sequences") {
  LinearProgram lp(3);
  lp.objective = {-1.0, -2.0, 1.0};
  lp.add_ge({-1.0, -1.0, -1.0}, -2.0);
  lp.add_ge({-1.0, 1.0, 0.0}, -1.0);
  lp.lower = {0.0, 0.0, 0.0};
  LpSolution a = solve(lp), b = solve(lp);
  REQUIRE(a.status == LpStatus::Optimal);
  CHECK(a.iterations == b.iterations);
  CHECK(a.x == b.x);
  CHECK(a.objective == b.objective);
}

TEST_CASE("minimum sup-norm solutions") {
  auto x = min_sup_norm_solve({{1.0, 1.0}}, {1.0});
  CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(x[1] == doctest::Approx(0.5).epsilon(1e-8));

  x = min_sup_norm_solve({{1.0, -1.0}}, {1.0});
  CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(x[1] == doctest::Approx(-0.5).epsilon(1e-8));

  x = min_sup_norm_solve({{1.0, 1.0, 0.0}, {0.0, 1.0, 1.0}}, {1.0, 1.0});
  REQUIRE(x.size() == 3);
  for (double v : x) CHECK(std::abs(v) <= 0.5 + 1e-8);
  CHECK(x[0] + x[1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(x[1] + x[2] == doctest::Approx(1.0).epsilon(1e-8));

  x = min_sup_norm_solve({{2.0}}, {3.0});
  CHECK(x[0] == doctest::Approx(1.5).epsilon(1e-10));

  // badly scaled rows are equilibrated first
  x = min_sup_norm_solve({{1e6, 1e6}}, {1e6});
  CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("sup-norm solve requires full row rank") {
  CHECK_THROWS_AS(min_sup_norm_solve({{1.0, 1.0}, {2.0, 2.0}}, {1.0, 2.0}),
                  RankDeficient);
  CHECK_THROWS_AS(min_sup_norm_solve({{0.0, 0.0}}, {1.0}), RankDeficient);
}

TEST_CASE("solution scaling homogeneity") {
  // the minimal sup-norm point scales linearly with the right-hand side
  std::vector<std::vector<double>> A{{1.0, 2.0, -1.0}, {0.0, 1.0, 1.0}};
  auto x1 = min_sup_norm_solve(A, {1.0, 2.0});
  auto x2 = min_sup_norm_solve(A, {0.5, 1.0});
  for (std::size_t k = 0; k < x1.size(); ++k)
    CHECK(x2[k] == doctest::Approx(0.5 * x1[k]).epsilon(1e-7));
}

}  // TEST_SUITE
