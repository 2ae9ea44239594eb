#include "momentcone/io.hpp"

#include <fstream>

#include "momentcone/errors.hpp"

namespace mcone {

namespace {

[[noreturn]] void fail(const std::string& what) { throw InvalidInput(what); }

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

double need_num(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number()) fail(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

int need_int(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number_integer()) fail(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

std::string need_str(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_string()) fail(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

Point point_from(const json& j, int dim, const char* what) {
  if (!j.is_array() || (dim >= 0 && static_cast<int>(j.size()) != dim))
    fail(std::string(what) + " must be an array of " + std::to_string(dim) +
         " numbers");
  Point p;
  for (const auto& x : j) {
    if (!x.is_number()) fail(std::string(what) + " entries must be numbers");
    p.push_back(x.get<double>());
  }
  return p;
}

std::vector<double> vec_from(const json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  std::vector<double> v;
  for (const auto& x : j) {
    if (!x.is_number()) fail(std::string(what) + " entries must be numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

json point_to(const Point& p) { return json(p); }

Box box_from(const json& j) {
  Point lo = point_from(need(j, "lo"), -1, "box lo");
  Point hi = point_from(need(j, "hi"), static_cast<int>(lo.size()), "box hi");
  return Box{std::move(lo), std::move(hi)};
}

json box_to(const Box& b) {
  json j;
  j["lo"] = point_to(b.lo);
  j["hi"] = point_to(b.hi);
  return j;
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    fail("malformed JSON in " + path + ": " + ex.what());
  }
}

json index_set_to_json(const IndexSet& I) {
  json arr = json::array();
  for (const MultiIndex& i : I.indices()) arr.push_back(json(i));
  return arr;
}

IndexSet index_set_from_json(const json& j, int dim) {
  if (!j.is_array() || j.empty()) fail("index_set must be a nonempty array");
  std::vector<MultiIndex> indices;
  for (const auto& e : j) {
    if (!e.is_array()) fail("index_set entries must be arrays of integers");
    MultiIndex mi;
    for (const auto& x : e) {
      if (!x.is_number_integer()) fail("multi-index entries must be integers");
      mi.push_back(x.get<int>());
    }
    indices.push_back(std::move(mi));
  }
  IndexSet I(dim, indices);
  // Moments and coefficients are positional, so the file must already list
  // indices in the canonical order (total degree, then lexicographic).
  if (I.indices() != indices)
    fail("index_set must be sorted by total degree then lexicographically");
  return I;
}

json polynomial_to_json(const Polynomial& p) {
  json j;
  j["index_set"] = index_set_to_json(p.index_set);
  j["coefficients"] = json(p.coefficients);
  return j;
}

Polynomial polynomial_from_json(const json& j, int dim) {
  IndexSet I = index_set_from_json(need(j, "index_set"), dim);
  std::vector<double> c = vec_from(need(j, "coefficients"), "coefficients");
  return Polynomial(std::move(I), std::move(c));
}

json region_to_json(const SupportRegion& T) {
  json j;
  if (const auto* b = std::get_if<Box>(&T.shape())) {
    j["type"] = "box";
    j["lo"] = point_to(b->lo);
    j["hi"] = point_to(b->hi);
  } else if (const auto* s = std::get_if<BallShape>(&T.shape())) {
    j["type"] = "ball";
    j["center"] = point_to(s->center);
    j["radius"] = s->radius;
  } else if (const auto* u = std::get_if<UnionShape>(&T.shape())) {
    j["type"] = "union";
    json boxes = json::array();
    for (const Box& b2 : u->boxes) boxes.push_back(box_to(b2));
    j["boxes"] = std::move(boxes);
  } else if (const auto* m = std::get_if<SemialgebraicShape>(&T.shape())) {
    j["type"] = "semialgebraic";
    j["box"] = box_to(m->box);
    json cons = json::array();
    for (const Polynomial& q : m->constraints) cons.push_back(polynomial_to_json(q));
    j["constraints"] = std::move(cons);
  }
  return j;
}

SupportRegion region_from_json(const json& j) {
  std::string type = need_str(j, "type");
  if (type == "box") {
    Box b = box_from(j);
    int dim = b.dim();
    return SupportRegion(dim, b);
  }
  if (type == "ball") {
    BallShape s;
    s.center = point_from(need(j, "center"), -1, "ball center");
    s.radius = need_num(j, "radius");
    int dim = static_cast<int>(s.center.size());
    return SupportRegion(dim, s);
  }
  if (type == "union") {
    const json& arr = need(j, "boxes");
    if (!arr.is_array() || arr.empty()) fail("union boxes must be a nonempty array");
    UnionShape u;
    for (const auto& e : arr) u.boxes.push_back(box_from(e));
    int dim = u.boxes.front().dim();
    return SupportRegion(dim, u);
  }
  if (type == "semialgebraic") {
    SemialgebraicShape m;
    m.box = box_from(need(j, "box"));
    int dim = m.box.dim();
    const json& cons = need(j, "constraints");
    if (!cons.is_array()) fail("constraints must be an array");
    for (const auto& e : cons) m.constraints.push_back(polynomial_from_json(e, dim));
    return SupportRegion(dim, m);
  }
  fail("unknown region type '" + type + "'");
}

json measure_to_json(const AtomicMeasure& nu, const SupportRegion& T) {
  json j;
  j["dim"] = nu.dim;
  j["support"] = region_to_json(T);
  json atoms = json::array();
  for (const Atom& a : nu.atoms) {
    json e;
    e["location"] = point_to(a.location);
    e["weight"] = a.weight;
    atoms.push_back(std::move(e));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

json density_to_json(const Density& d) {
  json j;
  j["dim"] = d.dim();
  j["support"] = region_to_json(d.support());
  json comps = json::array();
  for (const auto& comp : d.components()) {
    json e;
    if (const auto* b = std::get_if<BallComponent>(&comp)) {
      e["type"] = "ball";
      e["center"] = point_to(b->center);
      e["radius"] = b->radius;
      e["scale"] = b->scale;
    } else if (const auto* t = std::get_if<ExpTailComponent>(&comp)) {
      e["type"] = "exp_tail";
      e["scale"] = t->scale;
    } else if (const auto* c = std::get_if<CellsComponent>(&comp)) {
      e["type"] = "cells";
      json cells = json::array();
      for (const Box& b2 : c->cells) cells.push_back(box_to(b2));
      e["cells"] = std::move(cells);
      e["values"] = json(c->values);
    }
    comps.push_back(std::move(e));
  }
  j["components"] = std::move(comps);
  return j;
}

Density density_from_json(const json& j) {
  SupportRegion T = region_from_json(need(j, "support"));
  const json& comps = need(j, "components");
  if (!comps.is_array()) fail("components must be an array");
  std::vector<DensityComponent> parts;
  for (const auto& e : comps) {
    std::string type = need_str(e, "type");
    if (type == "ball") {
      BallComponent b;
      b.center = point_from(need(e, "center"), T.dim(), "ball center");
      b.radius = need_num(e, "radius");
      b.scale = need_num(e, "scale");
      parts.push_back(std::move(b));
    } else if (type == "exp_tail") {
      parts.push_back(ExpTailComponent{need_num(e, "scale")});
    } else if (type == "cells") {
      CellsComponent c;
      const json& cells = need(e, "cells");
      if (!cells.is_array()) fail("cells must be an array");
      for (const auto& b2 : cells) c.cells.push_back(box_from(b2));
      c.values = vec_from(need(e, "values"), "values");
      parts.push_back(std::move(c));
    } else if (type == "grid") {
      Box box = box_from(need(e, "box"));
      const json& res_j = need(e, "resolution");
      std::vector<int> res;
      if (!res_j.is_array()) fail("grid resolution must be an array");
      for (const auto& r : res_j) {
        if (!r.is_number_integer()) fail("grid resolution entries must be integers");
        res.push_back(r.get<int>());
      }
      parts.push_back(grid_function(box, res,
                                    vec_from(need(e, "values"), "grid values")));
    } else {
      fail("unknown density component type '" + type + "'");
    }
  }
  return Density(std::move(T), std::move(parts));
}

json certificate_to_json(const PositivityCertificate& cert) {
  json j;
  j["verdict"] = to_string(cert.verdict);
  j["margin"] = cert.margin;
  json w;
  w["index_set"] = index_set_to_json(cert.witness.index_set);
  w["coefficients"] = json(cert.witness.coefficients);
  j["witness"] = std::move(w);
  j["riesz_value"] = cert.riesz_value;
  j["min_on_T"] = cert.min_on_T;
  j["cuts_used"] = cert.cuts_used;
  j["resolution"] = cert.resolution_used;
  j["converged"] = cert.converged;
  j["constraint_points"] = static_cast<int>(cert.constraint_points.size());
  j["lp_values"] = json(cert.lp_values);
  return j;
}

json classification_to_json(const Classification& c) {
  json j;
  j["verdict"] = to_string(c.verdict);
  j["certificate"] = certificate_to_json(c.certificate);
  if (c.atomic_witness) {
    json atoms = json::array();
    for (const Atom& a : c.atomic_witness->atoms) {
      json e;
      e["location"] = point_to(a.location);
      e["weight"] = a.weight;
      atoms.push_back(std::move(e));
    }
    j["atomic_witness"] = std::move(atoms);
  }
  if (c.density_witness) j["density_witness"] = density_to_json(*c.density_witness);
  if (!c.diagnostics.empty()) j["diagnostics"] = c.diagnostics;
  return j;
}

SynthesisParams params_from_json(const json& j) {
  SynthesisParams p;
  if (j.is_null()) return p;
  if (!j.is_object()) fail("params must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    auto num = [&]() {
      if (!v.is_number()) fail("param '" + k + "' must be a number");
      return v.get<double>();
    };
    auto integer = [&]() {
      if (!v.is_number_integer()) fail("param '" + k + "' must be an integer");
      return v.get<int>();
    };
    if (k == "eta") p.certify.eta = num();
    else if (k == "tol_pos") p.certify.tol_pos = num();
    else if (k == "resolution") p.certify.resolution = integer();
    else if (k == "max_cuts") p.certify.max_cuts = integer();
    else if (k == "init_grid") p.certify.init_grid = integer();
    else if (k == "atomic_resolution") p.atomic_resolution = integer();
    else if (k == "cells") p.cells = integer();
    else if (k == "quad_tol") p.quad_tol = num();
    else if (k == "moment_tol") p.moment_tol = num();
    else if (k == "eps0") p.eps0 = num();
    else if (k == "eps_steps") p.eps_steps = integer();
    else if (k == "seed") p.seed = static_cast<std::uint64_t>(v.get<std::int64_t>());
    else fail("unknown param '" + k + "'");
  }
  return p;
}

ProblemFile load_problem(const json& j) {
  int dim = need_int(j, "dim");
  if (dim < 1) fail("dim must be >= 1");
  IndexSet I = index_set_from_json(need(j, "index_set"), dim);
  require_regular(I);
  std::vector<double> values = vec_from(need(j, "moments"), "moments");
  MomentVector g(std::move(I), std::move(values));
  std::size_t z = g.index_set.find(MultiIndex(dim, 0));
  if (std::abs(g.values[z] - 1.0) > 1e-9)
    fail("moment vector must be normalized: g_0 = 1");
  SupportRegion T = region_from_json(need(j, "support"));
  if (T.dim() != dim) fail("support dimension disagrees with 'dim'");
  SynthesisParams params =
      j.contains("params") ? params_from_json(j.at("params")) : SynthesisParams{};
  if (!T.positive_measure_check(params.seed))
    fail("support region fails the positive-measure check");
  return ProblemFile{std::move(g), std::move(T), params};
}

MeasureFile load_measure(const json& j) {
  int dim = need_int(j, "dim");
  SupportRegion T = region_from_json(need(j, "support"));
  if (T.dim() != dim) fail("support dimension disagrees with 'dim'");
  const json& arr = need(j, "atoms");
  if (!arr.is_array()) fail("atoms must be an array");
  std::vector<Atom> atoms;
  for (const auto& e : arr) {
    Atom a;
    a.location = point_from(need(e, "location"), dim, "atom location");
    a.weight = need_num(e, "weight");
    atoms.push_back(std::move(a));
  }
  MeasureFile out{AtomicMeasure(dim, std::move(atoms)), std::move(T), std::nullopt};
  if (j.contains("index_set"))
    out.index_set = index_set_from_json(j.at("index_set"), dim);
  return out;
}

DensityFile load_density(const json& j) {
  Density d = density_from_json(j);
  DensityFile out{std::move(d), std::nullopt};
  if (j.contains("index_set"))
    out.index_set = index_set_from_json(j.at("index_set"), out.density.dim());
  return out;
}

}  // namespace mcone
