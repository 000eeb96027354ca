#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "freightcoord/error.hpp"
#include "freightcoord/pricing.hpp"

using namespace fcoord;

namespace {

// r(w) = min_p [ p F(p) + w (1 - F(p)) ] by dense scan, independent of the
// closed form in the library.
double uniform_r_scan(double lo, double hi, double w) {
  double best = w;
  for (int i = 0; i <= 200000; ++i) {
    const double p = lo + (hi - lo) * i / 200000.0;
    const double F = (p - lo) / (hi - lo);
    best = std::min(best, p * F + w * (1.0 - F));
  }
  return best;
}

}  // namespace

TEST_CASE("uniform oracle closed-form points") {
  const UniformStaticOracle o(100.0, 200.0);
  const auto at0 = o.best_response(0.0);
  CHECK(at0.spot_cost == 0.0);
  CHECK(at0.non_procurement == 1.0);
  CHECK(at0.total == 0.0);
  CHECK(at0.posted_price().value() == doctest::Approx(100.0));

  const auto at160 = o.best_response(160.0);
  CHECK(at160.posted_price().value() == doctest::Approx(130.0));
  CHECK(at160.non_procurement == doctest::Approx(0.7));
  CHECK(at160.spot_cost == doctest::Approx(39.0));
  CHECK(at160.total == doctest::Approx(151.0));

  const auto at300 = o.best_response(300.0);
  CHECK(at300.posted_price().value() == doctest::Approx(200.0));
  CHECK(at300.non_procurement == doctest::Approx(0.0));
  CHECK(at300.spot_cost == doctest::Approx(200.0));
  CHECK(at300.total == doctest::Approx(200.0));
}

TEST_CASE("uniform oracle matches a brute-force price scan") {
  const UniformStaticOracle o(100.0, 200.0);
  for (double w = 0.0; w <= 400.0; w += 7.5) CHECK(o.total_cost(w) == doctest::Approx(uniform_r_scan(100, 200, w)).epsilon(1e-6));
}

TEST_CASE("r = s + q w on every oracle type") {
  const UniformStaticOracle u(100.0, 200.0);
  const LogisticStaticOracle g(0.05, 150.0, 0.0, 400.0);
  const auto grid = make_grid(100.0, 200.0, 1.0);
  const auto t = TabularMdpOracle::replicate(u, grid);
  const PricingOracle* all[] = {&u, &g, &t};
  for (const PricingOracle* o : all) {
    for (double w = 0.0; w <= 500.0; w += 12.5) {
      const auto s = o->best_response(w);
      CHECK(s.non_procurement >= 0.0);
      CHECK(s.non_procurement <= 1.0);
      CHECK(s.spot_cost >= 0.0);
      CHECK(std::fabs(s.total - (s.spot_cost + s.non_procurement * w)) <= 1e-12 * std::max(1.0, s.total));
    }
    const auto z = o->best_response(0.0);
    CHECK(z.non_procurement == 1.0);
    CHECK(z.spot_cost == 0.0);
  }
}

TEST_CASE("envelope residuals") {
  const UniformStaticOracle u(100.0, 200.0);
  CHECK(envelope_residual(u, 160.0, 0.01) <= 5e-5);
  CHECK(envelope_residual(u, 50.0, 10.0) == doctest::Approx(0.0));
  const auto grid = make_grid(100.0, 200.0, 1.0);
  REQUIRE(grid.size() == 101);
  const auto t = TabularMdpOracle::replicate(u, grid);
  for (double w = 110.0; w < 290.0; w += 3.3) CHECK(envelope_residual(t, w, 1.0) <= 0.01);
}

TEST_CASE("Lipschitz estimates") {
  const UniformStaticOracle u(100.0, 200.0);
  CHECK(lipschitz_estimate(u, make_grid(0.0, 400.0, 1.0)) == doctest::Approx(0.005));
  const ConstantOracle c(0.4);
  CHECK(lipschitz_estimate(c, make_grid(0.0, 400.0, 1.0)) == 0.0);
  const LogisticStaticOracle g(0.05, 150.0, 0.0, 400.0);
  const double beta = lipschitz_estimate(g, make_grid(0.0, 600.0, 1.0));
  CHECK(beta > 0.0);
  CHECK(beta <= 0.05 / 4.0 + 0.002);
}

TEST_CASE("logistic oracle withholds when w is below every profitable price") {
  const LogisticStaticOracle g(0.05, 150.0, 50.0, 400.0);
  const auto s = g.best_response(20.0);
  CHECK(s.non_procurement == doctest::Approx(1.0));
  CHECK(s.total == doctest::Approx(20.0));
  CHECK(s.posted_price().value() == 0.0);
}

TEST_CASE("multi-period tabular MDP beats its one-period restriction") {
  TabularMdpOracle::Spec spec;
  spec.horizon = 3;
  spec.num_states = 1;
  spec.prices = {0.0, 120.0, 150.0, 180.0};
  spec.accept.assign(3, {{0.0, 0.2, 0.5, 0.8}});
  const TabularMdpOracle three(spec);
  spec.horizon = 1;
  spec.accept.resize(1);
  const TabularMdpOracle one(spec);
  for (double w : {100.0, 200.0, 300.0}) {
    CHECK(three.total_cost(w) <= one.total_cost(w) + 1e-12);
    const auto s = three.best_response(w);
    CHECK(std::fabs(s.total - (s.spot_cost + s.non_procurement * w)) < 1e-9);
  }
  // Hand-computed backward induction at w = 300.
  // V3 = min(300, 120*.2+300*.8, 150*.5+300*.5, 180*.8+300*.2) = 204
  // V2 = min(204, 24+.8*204, 75+.5*204, 144+.2*204) = 177
  // V1 = min(177, 24+.8*177, 75+.5*177, 144+.2*177) = 163.5
  CHECK(three.total_cost(300.0) == doctest::Approx(163.5));
}

TEST_CASE("tabular oracle validates its spec") {
  TabularMdpOracle::Spec spec;
  spec.prices = {10.0, 20.0};
  spec.accept = {{{0.1, 0.5}}};
  CHECK_THROWS_AS(TabularMdpOracle{spec}, InputError);  // no zero price
  spec.prices = {0.0, 20.0};
  spec.accept = {{{0.0, 1.5}}};
  CHECK_THROWS_AS(TabularMdpOracle{spec}, InputError);
}

TEST_CASE("oracles reject bad terminal costs") {
  const UniformStaticOracle u(100.0, 200.0);
  CHECK_THROWS_AS(u.best_response(-1.0), InputError);
  CHECK_THROWS_AS(u.best_response(INFINITY), InputError);
  CHECK_THROWS_AS(UniformStaticOracle(200.0, 100.0), InputError);
}
