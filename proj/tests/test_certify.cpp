#include <doctest.h>

#include <cmath>

#include "momentcone/certify.hpp"
#include "momentcone/errors.hpp"

using namespace mcone;

namespace {

SupportRegion unit_interval() { return SupportRegion(1, Box{{0.0}, {1.0}}); }

MomentVector moments_1d(std::vector<double> v) {
  std::vector<MultiIndex> idx;
  for (std::size_t k = 0; k < v.size(); ++k) idx.push_back({static_cast<int>(k)});
  return MomentVector(IndexSet(1, std::move(idx)), std::move(v));
}

}  // namespace

TEST_SUITE("certify") {

TEST_CASE("polynomial minimization on a box") {
  IndexSet I(1, {{0}, {1}, {2}});
  // (t - 0.3)^2 + 0.1
  Polynomial p(I, {0.19, -0.6, 1.0});
  MinPolyResult r = min_poly_on_region(p, unit_interval(), 512);
  CHECK(r.value == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(r.point[0] == doctest::Approx(0.3).epsilon(1e-5));

  // minimum at the right endpoint
  Polynomial lin(IndexSet(1, {{0}, {1}}), {1.0, -0.5});
  MinPolyResult rl = min_poly_on_region(lin, unit_interval(), 512);
  CHECK(rl.value == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(rl.point[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("polynomial minimization in 2d") {
  IndexSet I(2, {{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}});
  // (x - 0.25)^2 + (y - 0.75)^2
  Polynomial p(I, {0.625, -1.5, -0.5, 1.0, 0.0, 1.0});
  MinPolyResult r =
      min_poly_on_region(p, SupportRegion(2, Box{{0.0, 0.0}, {1.0, 1.0}}), 128);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(r.point[0] == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(r.point[1] == doctest::Approx(0.75).epsilon(1e-4));
}

TEST_CASE("interior moments certify strictly positive") {
  MomentVector g = moments_1d({1.0, 0.5, 1.0 / 3, 0.25, 0.2});
  PositivityCertificate cert = certify(g, unit_interval());
  CHECK(cert.converged);
  CHECK(cert.verdict == Verdict::StrictlyPositive);
  CHECK(cert.margin > 0.0);
  CHECK(to_string(cert.verdict) == std::string("StrictlyPositive"));
}

TEST_CASE("boundary moments certify degenerate with the exact witness") {
  MomentVector g = moments_1d({1.0, 0.5, 0.25});
  PositivityCertificate cert = certify(g, unit_interval());
  CHECK(cert.converged);
  CHECK(cert.verdict == Verdict::Degenerate);
  CHECK(std::abs(cert.riesz_value) <= 1e-6);
  // scaled (t - 1/2)^2 is the unique normalized zero of phi_g
  double l1 = std::abs(cert.witness.coefficients[0] - 1.0 / 9) +
              std::abs(cert.witness.coefficients[1] + 4.0 / 9) +
              std::abs(cert.witness.coefficients[2] - 4.0 / 9);
  CHECK(l1 <= 1e-3);
}

TEST_CASE("non-representable moments produce a negative witness") {
  MomentVector g = moments_1d({1.0, 2.0, 1.0});
  PositivityCertificate cert = certify(g, unit_interval());
  CHECK(cert.converged);
  CHECK(cert.verdict == Verdict::NegativeWitness);
  // p = (1 - t)/2 gives phi_g p = -1/2; no unit-coefficient poly does better
  CHECK(cert.margin == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(cert.riesz_value <= -0.5 + 1e-9);
  CHECK(cert.min_on_T >= -1e-7);
}

TEST_CASE("certificate invariants") {
  for (auto values : {std::vector<double>{1.0, 0.5, 1.0 / 3, 0.25, 0.2},
                      std::vector<double>{1.0, 0.5, 0.25},
                      std::vector<double>{1.0, 2.0, 1.0},
                      std::vector<double>{1.0, 2.0 / 3, 0.5, 0.4, 1.0 / 3}}) {
    MomentVector g = moments_1d(values);
    CertifyParams params;
    PositivityCertificate cert = certify(g, unit_interval(), params);
    REQUIRE(cert.converged);

    // witness is normalized
    CHECK(poly_norm(cert.witness) == doctest::Approx(1.0).epsilon(1e-9));
    // margin is what the riesz functional actually assigns to the witness
    CHECK(cert.riesz_value ==
          doctest::Approx(riesz_apply(g, cert.witness)).epsilon(1e-12));
    // relaxation values never decrease as cuts accumulate
    for (std::size_t k = 1; k < cert.lp_values.size(); ++k)
      CHECK(cert.lp_values[k] >= cert.lp_values[k - 1] - 1e-9);
    // soundness: re-examining the witness on a finer grid finds no deep dip
    MinPolyResult fine =
        min_poly_on_region(cert.witness, unit_interval(),
                           4 * cert.resolution_used);
    CHECK(fine.value >= -2.0 * params.eta);
  }
}

TEST_CASE("certify is deterministic") {
  MomentVector g = moments_1d({1.0, 0.6, 0.45, 0.37, 0.32});
  PositivityCertificate a = certify(g, unit_interval());
  PositivityCertificate b = certify(g, unit_interval());
  CHECK(a.margin == b.margin);
  CHECK(a.cuts_used == b.cuts_used);
  CHECK(a.witness.coefficients == b.witness.coefficients);
  CHECK(a.lp_values == b.lp_values);
}

TEST_CASE("certify input validation") {
  SupportRegion T = unit_interval();
  // irregular index set
  MomentVector bad(IndexSet(2, {{0, 0}, {1, 1}}), {1.0, 0.5});
  CHECK_THROWS_AS(certify(bad, SupportRegion(2, Box{{0.0, 0.0}, {1.0, 1.0}})),
                  InvalidInput);
  // unnormalized mass
  CHECK_THROWS_AS(certify(moments_1d({2.0, 1.0, 0.5}), T), InvalidInput);
  // dimension mismatch
  CHECK_THROWS_AS(
      certify(moments_1d({1.0, 0.5, 0.25}),
              SupportRegion(2, Box{{0.0, 0.0}, {1.0, 1.0}})),
      InvalidInput);
}

TEST_CASE("brute force margin agrees with the certifier") {
  SupportRegion T = unit_interval();

  // strictly positive case: 10% relative agreement
  MomentVector leb = moments_1d({1.0, 0.5, 1.0 / 3});
  PositivityCertificate cert = certify(leb, T);
  REQUIRE(cert.verdict == Verdict::StrictlyPositive);
  double bf = brute_force_margin(leb, T, 20000, 512);
  CHECK(bf > 0.0);
  CHECK(std::abs(bf - cert.margin) <= 0.1 * std::max(bf, cert.margin));

  // boundary case: brute force cannot go below the degenerate level
  double bf0 = brute_force_margin(moments_1d({1.0, 0.5, 0.25}), T, 20000, 512);
  CHECK(bf0 >= -1e-6);
  CHECK(bf0 <= 0.05);

  // negative case: sign agreement
  double bfn = brute_force_margin(moments_1d({1.0, 2.0, 1.0}), T, 20000, 512);
  CHECK(bfn < 0.0);
}

TEST_CASE("two dimensional certification") {
  IndexSet I(2, {{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0},
                 {1, 2}, {2, 1}, {2, 2}});
  std::vector<double> vals;
  for (const MultiIndex& i : I.indices())
    vals.push_back(1.0 / ((i[0] + 1) * (i[1] + 1)));
  MomentVector g(I, vals);
  PositivityCertificate cert =
      certify(g, SupportRegion(2, Box{{0.0, 0.0}, {1.0, 1.0}}));
  CHECK(cert.converged);
  CHECK(cert.verdict == Verdict::StrictlyPositive);
  CHECK(cert.margin > 0.0);
}

}  // TEST_SUITE
