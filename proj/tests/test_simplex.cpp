#include <cmath>
#include <vector>

#include "doctest.h"
#include "freightcoord/error.hpp"
#include "freightcoord/lp.hpp"
#include "freightcoord/rng.hpp"

using namespace fcoord;

namespace {

LinearProgram example1_dual(std::size_t L, double B, double a, double q) {
  // variables lambda_0..lambda_{L-1}, mu
  LinearProgram lp;
  lp.sense = Sense::maximize;
  lp.objective.assign(L + 1, q);
  lp.objective[L] = -B;
  lp.upper.assign(L + 1, a);
  lp.upper[L] = kInf;
  for (std::size_t l = 0; l < L; ++l) lp.rows.push_back({{{l, 1.0}, {L, -1.0}}, Relation::less_equal, 0.0});
  return lp;
}

}  // namespace

TEST_CASE("one-variable LP") {
  LinearProgram lp;
  lp.sense = Sense::maximize;
  lp.objective = {1.0};
  lp.rows = {{{{0, 1.0}}, Relation::less_equal, 3.0}};
  const auto s = solve_lp(lp);
  CHECK(s.x[0] == doctest::Approx(3.0));
  CHECK(s.objective == doctest::Approx(3.0));
  CHECK(s.row_duals[0] == doctest::Approx(1.0));
}

TEST_CASE("textbook LP with all relation kinds") {
  // min 2x + 3y s.t. x + y >= 4, x - y <= 1, x + 2y = 6 -> (2, 2), obj 10
  LinearProgram lp;
  lp.objective = {2.0, 3.0};
  lp.rows = {{{{0, 1.0}, {1, 1.0}}, Relation::greater_equal, 4.0},
             {{{0, 1.0}, {1, -1.0}}, Relation::less_equal, 1.0},
             {{{0, 1.0}, {1, 2.0}}, Relation::equal, 6.0}};
  const auto s = solve_lp(lp);
  CHECK(s.x[0] == doctest::Approx(2.0));
  CHECK(s.x[1] == doctest::Approx(2.0));
  CHECK(s.objective == doctest::Approx(10.0));
}

TEST_CASE("nonzero lower bounds and finite upper bounds") {
  // max x + y, 1 <= x <= 2, 0.5 <= y <= 4, x + y <= 5
  LinearProgram lp;
  lp.sense = Sense::maximize;
  lp.objective = {1.0, 1.0};
  lp.lower = {1.0, 0.5};
  lp.upper = {2.0, 4.0};
  lp.rows = {{{{0, 1.0}, {1, 1.0}}, Relation::less_equal, 5.0}};
  const auto s = solve_lp(lp);
  CHECK(s.objective == doctest::Approx(5.0));
  CHECK(s.x[0] + s.x[1] == doctest::Approx(5.0));
}

TEST_CASE("infeasible and unbounded programs raise SolverError") {
  LinearProgram inf;
  inf.objective = {1.0};
  inf.rows = {{{{0, 1.0}}, Relation::less_equal, -1.0}};
  CHECK_THROWS_AS(solve_lp(inf), SolverError);

  LinearProgram unb;
  unb.sense = Sense::maximize;
  unb.objective = {1.0, 0.0};
  unb.rows = {{{{1, 1.0}}, Relation::less_equal, 1.0}};
  CHECK_THROWS_AS(solve_lp(unb), SolverError);
}

TEST_CASE("malformed programs raise InputError") {
  LinearProgram lp;
  lp.objective = {1.0};
  lp.rows = {{{{3, 1.0}}, Relation::less_equal, 1.0}};
  CHECK_THROWS_AS(solve_lp(lp), InputError);
  lp.rows = {{{{0, NAN}}, Relation::less_equal, 1.0}};
  CHECK_THROWS_AS(solve_lp(lp), InputError);
}

TEST_CASE("Example-1 dual at q = 1 and q = 0.7") {
  const auto at1 = solve_lp(example1_dual(1000, 700, 300, 1.0));
  CHECK(at1.objective == doctest::Approx(90000.0));
  for (std::size_t l = 0; l < 1000; l += 97) CHECK(at1.x[l] == doctest::Approx(300.0));
  CHECK(at1.x[1000] == doctest::Approx(300.0));
  const auto at07 = solve_lp(example1_dual(1000, 700, 300, 0.7));
  CHECK(std::fabs(at07.objective) < 1e-6);
}

TEST_CASE("row duals match finite differences of the optimum") {
  RngEngine rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    LinearProgram lp;
    lp.sense = trial % 2 ? Sense::maximize : Sense::minimize;
    const std::size_t n = 4;
    lp.objective.resize(n);
    for (double& c : lp.objective) c = rng.uniform(0.5, 3.0) * (lp.sense == Sense::maximize ? 1.0 : -1.0);
    lp.upper.assign(n, 10.0);
    for (int r = 0; r < 3; ++r) {
      LinearConstraint row;
      for (std::size_t j = 0; j < n; ++j) row.terms.push_back({j, rng.uniform(0.1, 2.0)});
      row.rhs = rng.uniform(2.0, 8.0);
      lp.rows.push_back(row);
    }
    const auto base = solve_lp(lp);
    for (std::size_t r = 0; r < lp.rows.size(); ++r) {
      auto bumped = lp;
      bumped.rows[r].rhs += 1e-5;
      const double fd = (solve_lp(bumped).objective - base.objective) / 1e-5;
      CHECK(base.row_duals[r] == doctest::Approx(fd).epsilon(1e-3).scale(1.0));
    }
  }
}

TEST_CASE("warm resolve matches a cold solve") {
  RngEngine rng(3);
  auto lp = example1_dual(30, 20, 300, 1.0);
  SimplexSolver warm(lp);
  warm.solve();
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<double> c(31);
    for (std::size_t l = 0; l < 30; ++l) c[l] = rng.uniform();
    c[30] = -20.0;
    lp.objective = c;
    const double cold = solve_lp(lp).objective;
    CHECK(warm.resolve_with_objective(c).objective == doctest::Approx(cold).epsilon(1e-9));
  }
}

TEST_CASE("Bland and Dantzig rules agree on the optimum") {
  RngEngine rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    LinearProgram lp;
    lp.sense = Sense::maximize;
    lp.objective.resize(6);
    for (double& c : lp.objective) c = rng.uniform(-1.0, 2.0);
    for (int r = 0; r < 5; ++r) {
      LinearConstraint row;
      for (std::size_t j = 0; j < 6; ++j) row.terms.push_back({j, rng.uniform(0.0, 1.0)});
      row.rhs = rng.uniform(1.0, 3.0);
      lp.rows.push_back(row);
    }
    SimplexOptions dz;
    dz.rule = PivotRule::dantzig;
    CHECK(solve_lp(lp).objective == doctest::Approx(solve_lp(lp, dz).objective).epsilon(1e-9));
  }
}

TEST_CASE("degenerate cycling example terminates under Bland") {
  // Beale's example; cycles under the textbook largest-coefficient rule.
  LinearProgram lp;
  lp.objective = {-0.75, 150.0, -0.02, 6.0};
  lp.rows = {{{{0, 0.25}, {1, -60.0}, {2, -0.04}, {3, 9.0}}, Relation::less_equal, 0.0},
             {{{0, 0.5}, {1, -90.0}, {2, -0.02}, {3, 3.0}}, Relation::less_equal, 0.0},
             {{{2, 1.0}}, Relation::less_equal, 1.0}};
  const auto s = solve_lp(lp);
  CHECK(s.objective == doctest::Approx(-0.05));
}
