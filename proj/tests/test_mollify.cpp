#include <doctest.h>

#include <cmath>

#include "momentcone/errors.hpp"
#include "momentcone/mollify.hpp"

using namespace mcone;

namespace {

SupportRegion unit_interval() { return SupportRegion(1, Box{{0.0}, {1.0}}); }
SupportRegion unit_square() { return SupportRegion(2, Box{{0.0, 0.0}, {1.0, 1.0}}); }

IndexSet deg_1d(int d) {
  std::vector<MultiIndex> idx;
  for (int k = 0; k <= d; ++k) idx.push_back({k});
  return IndexSet(1, std::move(idx));
}

}  // namespace

TEST_SUITE("mollify") {

TEST_CASE("point mass smears into the closed-form bump") {
  AtomicMeasure nu(1, {{{0.5}, 1.0}});
  Density d = mollify(nu, unit_interval(), 0.1, false);
  REQUIRE(d.components().size() == 1);
  const auto* bump = std::get_if<BallComponent>(&d.components()[0]);
  REQUIRE(bump != nullptr);
  CHECK(bump->scale == doctest::Approx(5.0).epsilon(1e-12));

  MomentVector m = density_moments(d, deg_1d(2), 1e-10);
  CHECK(m.values[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(m.values[1] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(m.values[2] == doctest::Approx(0.76 / 3.0).epsilon(1e-8));
}

TEST_CASE("normalized local moments") {
  SupportRegion T = unit_interval();
  CHECK(psi(0.1, {0}, {0.5}, T) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(psi(0.1, {1}, {0.5}, T) == doctest::Approx(0.5).epsilon(1e-8));
  // boundary atom: the surviving half-window [0, 0.1] has mean 0.05
  CHECK(psi(0.1, {1}, {0.0}, T) == doctest::Approx(0.05).epsilon(1e-8));
  CHECK(psi(0.1, {0}, {0.0}, T) == doctest::Approx(1.0).epsilon(1e-8));
  // 2d, interior; explicit tolerance (the 2d default is looser)
  CHECK(psi(0.1, {0, 0}, {0.5, 0.5}, unit_square(), 1e-8) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(psi(0.1, {1, 0}, {0.5, 0.5}, unit_square(), 1e-8) ==
        doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("moment drift bound values") {
  AtomicMeasure nu(1, {{{0.5}, 1.0}});
  CHECK(error_bound(nu, 0.1, {0}) == 0.0);  // mass is preserved exactly
  // eps * (C(2,0)|m_0| + C(2,1)|m_1| + C(2,2)|m_2|) = 0.1 * (1 + 1 + 0.25)
  CHECK(error_bound(nu, 0.1, {2}) == doctest::Approx(0.225).epsilon(1e-12));
  CHECK(error_bound(nu, 0.1, {1}) == doctest::Approx(0.15).epsilon(1e-12));

  AtomicMeasure nu2(2, {{{0.5, 0.5}, 1.0}});
  // i = (1,1): sum over j in {0,1}^2 of C(1,j1)C(1,j2) |m_j|
  double expect = 0.1 * (1.0 + 0.5 + 0.5 + 0.25);
  CHECK(error_bound(nu2, 0.1, {1, 1}) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("measured drift stays within the bound") {
  SupportRegion T = unit_interval();
  AtomicMeasure nu(1, {{{0.15}, 0.3}, {{0.9}, 0.7}});
  IndexSet I = deg_1d(4);
  MomentVector exact = atomic_moments(nu, I);
  for (double eps : {0.2, 0.1, 0.05}) {
    Density d = mollify(nu, T, eps, false);
    MomentVector m = density_moments(d, I, 1e-10);
    for (std::size_t k = 0; k < I.size(); ++k) {
      double drift = std::abs(m.values[k] - exact.values[k]);
      CHECK(drift <= error_bound(nu, eps, I[k]) + 1e-9);
    }
  }
}

TEST_CASE("measured drift within the bound in 2d") {
  SupportRegion T = unit_square();
  AtomicMeasure nu(2, {{{0.1, 0.8}, 0.5}, {{0.65, 0.4}, 0.5}});
  IndexSet I(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2}, {2, 0}});
  MomentVector exact = atomic_moments(nu, I);
  Density d = mollify(nu, T, 0.1, false);
  MomentVector m = density_moments(d, I, 1e-8);
  for (std::size_t k = 0; k < I.size(); ++k) {
    double drift = std::abs(m.values[k] - exact.values[k]);
    CHECK(drift <= error_bound(nu, 0.1, I[k]) + 1e-7);
  }
}

TEST_CASE("strict positivity tail") {
  AtomicMeasure nu(1, {{{0.5}, 1.0}});
  SupportRegion T = unit_interval();
  Density plain = mollify(nu, T, 0.1, false);
  Density pos = mollify(nu, T, 0.1, true);
  CHECK(pos.components().size() == plain.components().size() + 1);
  // away from the bump the plain version vanishes, the tail does not
  CHECK(plain.value({0.9}) == 0.0);
  CHECK(pos.value({0.9}) == doctest::Approx(0.1 * std::exp(-0.9)).epsilon(1e-12));
  // the tail shifts the mass by eps * int e^{-t}
  MomentVector mp = density_moments(plain, deg_1d(0), 1e-10);
  MomentVector mt = density_moments(pos, deg_1d(0), 1e-10);
  CHECK(mt.values[0] - mp.values[0] ==
        doctest::Approx(0.1 * 0.6321205588285577).epsilon(1e-9));
}

TEST_CASE("input guards") {
  AtomicMeasure nu(1, {{{0.5}, 1.0}});
  SupportRegion T = unit_interval();
  CHECK_THROWS_AS(mollify(nu, T, 0.0, false), InvalidInput);
  CHECK_THROWS_AS(mollify(nu, T, 1.0, false), InvalidInput);
  CHECK_THROWS_AS(mollify(nu, T, -0.5, false), InvalidInput);
  AtomicMeasure outside(1, {{{1.5}, 1.0}});
  CHECK_THROWS_AS(mollify(outside, T, 0.1, false), InvalidInput);
  CHECK_THROWS_AS(psi(0.1, {0, 0}, {0.5}, T), InvalidInput);  // dim mismatch

  // a measure-thin support cannot normalize the bump
  SupportRegion thin(1, Box{{0.5}, {0.5}});
  AtomicMeasure at(1, {{{0.5}, 1.0}});
  CHECK_THROWS_AS(mollify(at, thin, 0.1, false), RegularityViolation);
}

TEST_CASE("mollification is deterministic") {
  AtomicMeasure nu(2, {{{0.3, 0.7}, 1.0}});
  Density a = mollify(nu, unit_square(), 0.15, true);
  Density b = mollify(nu, unit_square(), 0.15, true);
  const auto* ba = std::get_if<BallComponent>(&a.components()[0]);
  const auto* bb = std::get_if<BallComponent>(&b.components()[0]);
  REQUIRE(ba != nullptr);
  REQUIRE(bb != nullptr);
  CHECK(ba->scale == bb->scale);
}

}  // TEST_SUITE
