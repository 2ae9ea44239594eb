#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "momentcone/errors.hpp"
#include "momentcone/io.hpp"

using namespace mcone;

namespace {

json problem_json() {
  return json::parse(R"({
    "dim": 1,
    "index_set": [[0], [1], [2]],
    "moments": [1.0, 0.5, 0.25],
    "support": {"type": "box", "lo": [0.0], "hi": [1.0]}
  })");
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("region round trips") {
  std::vector<SupportRegion> regions;
  regions.emplace_back(1, Box{{0.0}, {1.0}});
  regions.emplace_back(2, BallShape{{0.5, 0.5}, 0.25});
  regions.emplace_back(1, UnionShape{{Box{{0.0}, {0.4}}, Box{{0.6}, {1.0}}}});
  regions.emplace_back(
      2, SemialgebraicShape{
             Box{{0.0, 0.0}, {1.0, 1.0}},
             {Polynomial(IndexSet(2, {{0, 0}, {0, 1}, {1, 0}}),
                         {-1.0, 1.0, 1.0})}});
  for (const SupportRegion& T : regions) {
    json a = region_to_json(T);
    json b = region_to_json(region_from_json(a));
    CHECK(a == b);
    CHECK(a.dump() == b.dump());  // byte-stable, not just value-equal
  }
}

TEST_CASE("polynomial round trip") {
  Polynomial p(IndexSet(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}),
               {0.25, -1.0, 2.0, 0.125});
  json a = polynomial_to_json(p);
  json b = polynomial_to_json(polynomial_from_json(a, 2));
  CHECK(a == b);
}

TEST_CASE("density round trip") {
  SupportRegion T(1, Box{{0.0}, {1.0}});
  Density d(T, {BallComponent{{0.5}, 0.1, 2.0}, ExpTailComponent{0.01},
                CellsComponent{{Box{{0.0}, {0.5}}, Box{{0.5}, {1.0}}},
                               {0.5, -0.125}}});
  json a = density_to_json(d);
  json b = density_to_json(density_from_json(a));
  CHECK(a == b);
  CHECK(a.dump() == b.dump());
}

TEST_CASE("grid components load as cells") {
  json j = json::parse(R"({
    "dim": 1,
    "support": {"type": "box", "lo": [0.0], "hi": [1.0]},
    "components": [
      {"type": "grid", "box": {"lo": [0.0], "hi": [1.0]},
       "resolution": [2], "values": [1.0, 3.0]}
    ]
  })");
  Density d = density_from_json(j);
  CHECK(d.value({0.25}) == 1.0);
  CHECK(d.value({0.75}) == 3.0);
  json out = density_to_json(d);
  REQUIRE(out.at("components").size() == 1);
  CHECK(out.at("components")[0].at("type") == "cells");
  CHECK(out.at("components")[0].at("cells").size() == 2);
}

TEST_CASE("measure serialization") {
  SupportRegion T(1, Box{{0.0}, {1.0}});
  AtomicMeasure nu(1, {{{0.25}, 0.5}, {{0.75}, 0.5}});
  json j = measure_to_json(nu, T);
  CHECK(j.at("dim") == 1);
  CHECK(j.at("support").at("type") == "box");
  REQUIRE(j.at("atoms").size() == 2);
  CHECK(j.at("atoms")[0].at("location")[0] == 0.25);
  CHECK(j.at("atoms")[1].at("weight") == 0.5);
}

TEST_CASE("certificate and classification serialization") {
  PositivityCertificate cert;
  cert.verdict = Verdict::Degenerate;
  cert.margin = 1e-9;
  cert.witness = Polynomial(IndexSet(1, {{0}, {1}}), {0.5, -0.5});
  cert.riesz_value = 1e-9;
  cert.min_on_T = -1e-8;
  cert.cuts_used = 3;
  cert.resolution_used = 512;
  cert.converged = true;
  cert.constraint_points = {{0.0}, {1.0}};
  cert.lp_values = {-0.25, 1e-9};
  json cj = certificate_to_json(cert);
  for (const char* key : {"verdict", "margin", "witness", "riesz_value",
                          "min_on_T", "cuts_used", "resolution", "converged",
                          "constraint_points", "lp_values"})
    CHECK(cj.contains(key));
  CHECK(cj.at("verdict") == "Degenerate");
  CHECK(cj.at("constraint_points") == 2);

  Classification c;
  c.verdict = ClassVerdict::Boundary;
  c.certificate = cert;
  c.atomic_witness = AtomicMeasure(1, {{{0.5}, 1.0}});
  json kj = classification_to_json(c);
  CHECK(kj.at("verdict") == "Boundary");
  CHECK(kj.contains("certificate"));
  CHECK(kj.contains("atomic_witness"));
  CHECK(!kj.contains("density_witness"));
  CHECK(!kj.contains("diagnostics"));

  Classification u;
  u.verdict = ClassVerdict::Unresolved;
  u.diagnostics = "certificate did not converge";
  json uj = classification_to_json(u);
  CHECK(uj.at("diagnostics") == "certificate did not converge");
  CHECK(!uj.contains("atomic_witness"));
}

TEST_CASE("problem files load and validate") {
  ProblemFile p = load_problem(problem_json());
  CHECK(p.moments.index_set.size() == 3);
  CHECK(p.moments.values[2] == 0.25);
  CHECK(p.support.dim() == 1);

  json missing = problem_json();
  missing.erase("moments");
  CHECK_THROWS_AS(load_problem(missing), InvalidInput);

  json unnormalized = problem_json();
  unnormalized["moments"][0] = 2.0;
  CHECK_THROWS_AS(load_problem(unnormalized), InvalidInput);

  json bad_dim = problem_json();
  bad_dim["dim"] = 0;
  CHECK_THROWS_AS(load_problem(bad_dim), InvalidInput);

  json mismatched = problem_json();
  mismatched["support"] = json::parse(
      R"({"type": "box", "lo": [0.0, 0.0], "hi": [1.0, 1.0]})");
  CHECK_THROWS_AS(load_problem(mismatched), InvalidInput);

  json thin = problem_json();
  thin["support"]["hi"] = json::parse("[0.0]");
  CHECK_THROWS_AS(load_problem(thin), InvalidInput);

  json irregular = json::parse(R"({
    "dim": 2,
    "index_set": [[0, 0], [1, 1]],
    "moments": [1.0, 0.25],
    "support": {"type": "box", "lo": [0.0, 0.0], "hi": [1.0, 1.0]}
  })");
  CHECK_THROWS_AS(load_problem(irregular), InvalidInput);

  json unsorted = problem_json();
  unsorted["index_set"] = json::parse("[[1], [0], [2]]");
  CHECK_THROWS_AS(load_problem(unsorted), InvalidInput);

  json bad_param = problem_json();
  bad_param["params"] = json::parse(R"({"tolerance": 1e-6})");
  CHECK_THROWS_AS(load_problem(bad_param), InvalidInput);
}

TEST_CASE("params parse every knob") {
  json j = json::parse(R"({
    "eta": 1e-8, "tol_pos": 1e-5, "resolution": 64, "max_cuts": 10,
    "init_grid": 5, "atomic_resolution": 33, "cells": 12,
    "quad_tol": 1e-7, "moment_tol": 1e-5, "eps0": 0.1, "eps_steps": 4,
    "seed": 99
  })");
  SynthesisParams p = params_from_json(j);
  CHECK(p.certify.eta == 1e-8);
  CHECK(p.certify.tol_pos == 1e-5);
  CHECK(p.certify.resolution == 64);
  CHECK(p.certify.max_cuts == 10);
  CHECK(p.certify.init_grid == 5);
  CHECK(p.atomic_resolution == 33);
  CHECK(p.cells == 12);
  CHECK(p.quad_tol == 1e-7);
  CHECK(p.moment_tol == 1e-5);
  CHECK(p.eps0 == 0.1);
  CHECK(p.eps_steps == 4);
  CHECK(p.seed == 99);

  SynthesisParams defaults = params_from_json(json(nullptr));
  CHECK(defaults.eps0 == 0.2);
  CHECK(defaults.seed == 0);
}

TEST_CASE("measure files carry an optional index set") {
  json j = json::parse(R"({
    "dim": 1,
    "support": {"type": "box", "lo": [0.0], "hi": [1.0]},
    "atoms": [{"location": [0.5], "weight": 1.0}],
    "index_set": [[0], [1]]
  })");
  MeasureFile m = load_measure(j);
  CHECK(m.measure.mass() == 1.0);
  REQUIRE(m.index_set.has_value());
  CHECK(m.index_set->size() == 2);

  j.erase("index_set");
  CHECK(!load_measure(j).index_set.has_value());
}

TEST_CASE("file loading wraps parse failures") {
  CHECK_THROWS_AS(load_json_file("/nonexistent/path.json"), InvalidInput);

  const char* path = "/tmp/momentcone_io_test.json";
  {
    std::ofstream out(path);
    out << "{\"dim\": 1,";  // truncated on purpose
  }
  CHECK_THROWS_AS(load_json_file(path), InvalidInput);
  {
    std::ofstream out(path);
    out << R"({"dim": 1})";
  }
  CHECK(load_json_file(path).at("dim") == 1);
  std::remove(path);
}

}  // TEST_SUITE
