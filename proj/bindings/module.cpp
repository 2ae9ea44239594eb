#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "momentcone/errors.hpp"
#include "momentcone/io.hpp"
#include "momentcone/mollify.hpp"

namespace py = pybind11;
namespace mc = mcone;

namespace {

// All structured data crosses the boundary as JSON text; the Python package
// wraps these in dict-level helpers.  Keeps the ABI surface to one string type.
std::string certify_str(const std::string& problem) {
  mc::ProblemFile pf = mc::load_problem(mc::json::parse(problem));
  mc::PositivityCertificate cert =
      mc::certify(pf.moments, pf.support, pf.params.certify);
  return mc::certificate_to_json(cert).dump(2);
}

std::string classify_str(const std::string& problem) {
  mc::ProblemFile pf = mc::load_problem(mc::json::parse(problem));
  mc::Classification cls = mc::classify(pf.moments, pf.support, pf.params);
  return mc::classification_to_json(cls).dump(2);
}

// same payload shape as `synthesize --json`
std::string synthesize_str(const std::string& problem) {
  mc::ProblemFile pf = mc::load_problem(mc::json::parse(problem));
  mc::BuildResult built = mc::build_density(pf.moments, pf.support, pf.params);
  mc::json dj = mc::density_to_json(built.density);
  dj["index_set"] = mc::index_set_to_json(pf.moments.index_set);
  mc::json report;
  report["eps"] = built.eps;
  report["delta"] = built.correction.delta;
  report["k"] = built.correction.k;
  report["u_inf"] = built.correction.u_inf;
  report["v_inf"] = built.correction.v_inf;
  report["moments"] = mc::json(built.correction.moments_after);
  report["max_moment_error"] = built.max_moment_error;
  mc::json out;
  out["density"] = std::move(dj);
  out["report"] = std::move(report);
  return out.dump(2);
}

std::string mollify_str(const std::string& measure, double eps,
                        bool ensure_positive) {
  mc::MeasureFile mf = mc::load_measure(mc::json::parse(measure));
  mc::Density d = mc::mollify(mf.measure, mf.support, eps, ensure_positive);
  mc::json dj = mc::density_to_json(d);
  if (mf.index_set) dj["index_set"] = mc::index_set_to_json(*mf.index_set);
  return dj.dump(2);
}

std::string moments_str(const std::string& file, double tol,
                        std::uint64_t seed) {
  mc::json j = mc::json::parse(file);
  mc::IndexSet I;
  mc::MomentVector m;
  if (j.contains("atoms")) {
    mc::MeasureFile mf = mc::load_measure(j);
    if (!mf.index_set) throw mc::InvalidInput("measure file lacks index_set");
    m = mc::atomic_moments(mf.measure, *mf.index_set);
    I = *mf.index_set;
  } else {
    mc::DensityFile df = mc::load_density(j);
    if (!df.index_set) throw mc::InvalidInput("density file lacks index_set");
    double t = tol > 0 ? tol : mc::default_quad_tol(df.density.dim());
    m = mc::density_moments(df.density, *df.index_set, t, seed);
    I = *df.index_set;
  }
  mc::json out;
  out["index_set"] = mc::index_set_to_json(I);
  out["moments"] = mc::json(m.values);
  return out.dump(2);
}

std::vector<std::vector<int>> close_set(
    int dim, const std::vector<std::vector<int>>& indices) {
  return mc::close_index_set(dim, indices).indices();
}

double riesz(const std::vector<double>& g, const std::vector<double>& coeffs) {
  if (g.size() != coeffs.size())
    throw mc::InvalidInput("moment and coefficient vectors differ in length");
  double acc = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) acc += g[k] * coeffs[k];
  return acc;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "native kernels for truncated moment problems";

  py::register_exception<mc::InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  static py::exception<mc::MomentError> moment_error(m, "MomentError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const mc::InvalidInput&) {
      throw;  // handled by the registration above
    } catch (const mc::MomentError& e) {
      PyErr_SetString(moment_error.ptr(), (e.kind() + ": " + e.what()).c_str());
    }
  });

  m.def("certify_json", &certify_str, py::arg("problem_json"),
        "positivity certificate for a problem document (JSON in, JSON out)");
  m.def("classify_json", &classify_str, py::arg("problem_json"),
        "trichotomy classification (JSON in, JSON out)");
  m.def("synthesize_json", &synthesize_str, py::arg("problem_json"),
        "construct a strictly positive representing density (JSON in, JSON out)");
  m.def("mollify_json", &mollify_str, py::arg("measure_json"), py::arg("eps"),
        py::arg("ensure_positive") = false,
        "smear an atomic measure into a density (JSON in, JSON out)");
  m.def("moments_json", &moments_str, py::arg("file_json"), py::arg("tol") = 0.0,
        py::arg("seed") = 0,
        "moments of a measure or density document (JSON in, JSON out)");
  m.def("sigma", &mc::sigma, py::arg("index"),
        "indices obtained by zeroing subsets of nonzero entries");
  m.def("close_index_set", &close_set, py::arg("dim"), py::arg("indices"),
        "smallest superset closed under sigma");
  m.def("riesz_apply", &riesz, py::arg("moments"), py::arg("coefficients"),
        "pairing of a moment vector with polynomial coefficients");
}
