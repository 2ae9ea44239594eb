#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "momentcone/errors.hpp"
#include "momentcone/io.hpp"
#include "momentcone/mollify.hpp"
#include "momentcone/multiindex.hpp"

namespace mc = mcone;
using mc::json;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  int resolution = 0;   // 0: module defaults
  double tol = 0.0;     // 0: module defaults
  bool machine = false; // --json
  int threads = 1;
};

void emit(const GlobalOpts& g, const json& payload, const std::string& human) {
  if (g.machine)
    std::cout << payload.dump(2) << "\n";
  else
    std::cout << human;
}

int emit_error(const GlobalOpts& g, const std::string& kind,
               const std::string& message, int code) {
  if (g.machine) {
    json j;
    j["error"]["kind"] = kind;
    j["error"]["message"] = message;
    std::cout << j.dump(2) << "\n";
  }
  std::cerr << "error (" << kind << "): " << message << "\n";
  return code;
}

mc::SynthesisParams apply_overrides(mc::SynthesisParams p, const GlobalOpts& g,
                                    bool tol_is_tol_pos) {
  p.seed = g.seed;
  if (g.resolution > 0) {
    p.certify.resolution = g.resolution;
    p.atomic_resolution = g.resolution;
  }
  if (g.tol > 0) {
    if (tol_is_tol_pos)
      p.certify.tol_pos = g.tol;
    else
      p.quad_tol = g.tol;
  }
  return p;
}

mc::IndexSet index_set_for(const std::optional<mc::IndexSet>& from_file,
                           int degree, int dim) {
  if (from_file) return *from_file;
  if (degree < 0)
    throw mc::InvalidInput(
        "no index set: add an \"index_set\" field to the file or pass --degree");
  std::vector<mc::MultiIndex> all;
  mc::MultiIndex i(dim, 0);
  while (true) {
    if (mc::degree(i) <= degree) all.push_back(i);
    int k = dim - 1;
    while (k >= 0 && i[k] == degree) i[k--] = 0;
    if (k < 0) break;
    ++i[k];
  }
  return mc::IndexSet(dim, std::move(all));
}

json moments_json(const mc::IndexSet& I, const std::vector<double>& values) {
  json j;
  j["index_set"] = mc::index_set_to_json(I);
  j["moments"] = json(values);
  return j;
}

void write_output(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw mc::InvalidInput("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

// density sampled on a tensor grid, one "t1,...,tn,value" row per point
void write_density_csv(const std::string& path, const mc::Density& d, int res) {
  std::ofstream out(path);
  if (!out) throw mc::InvalidInput("cannot write file: " + path);
  mc::SampleGrid grid = mc::sample_grid(d.support(), res > 0 ? res : 101);
  for (int k = 0; k < d.dim(); ++k) out << "t" << k + 1 << ",";
  out << "value\n";
  out.precision(17);
  for (const mc::Point& t : grid.points) {
    for (double x : t) out << x << ",";
    out << d.value(t) << "\n";
  }
}

int verdict_code(mc::Verdict v, bool converged) {
  if (!converged) return 3;
  switch (v) {
    case mc::Verdict::StrictlyPositive: return 0;
    case mc::Verdict::Degenerate: return 1;
    case mc::Verdict::NegativeWitness: return 2;
  }
  return 3;
}

int verdict_code(mc::ClassVerdict v) {
  switch (v) {
    case mc::ClassVerdict::InteriorRepresentable: return 0;
    case mc::ClassVerdict::Boundary: return 1;
    case mc::ClassVerdict::NotRepresentable: return 2;
    case mc::ClassVerdict::Unresolved: return 3;
  }
  return 3;
}

int run(int argc, char** argv) {
  CLI::App app{"truncated moment problems with absolutely continuous solutions"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--seed", g.seed, "seed for all deterministic sampling");
  app.add_option("--resolution", g.resolution, "grid resolution override");
  app.add_option("--tol", g.tol, "primary tolerance override");
  app.add_flag("--json", g.machine, "machine-readable JSON on stdout");
  app.add_option("--threads", g.threads, "worker cap (execution is sequential)")
      ->check(CLI::PositiveNumber);

  std::string in_path, out_path, csv_path;
  double eps = 0.1;
  bool ensure_positive = false;
  std::vector<double> beta;
  int cells = 0, degree = -1, samples = 200;
  std::vector<double> probe_eps{0.1, 0.05, 0.01};

  CLI::App* c_certify = app.add_subcommand("certify", "positivity certificate for a problem file");
  c_certify->add_option("problem", in_path, "problem JSON")->required();

  CLI::App* c_classify = app.add_subcommand("classify", "trichotomy classification of a problem file");
  c_classify->add_option("problem", in_path, "problem JSON")->required();

  CLI::App* c_synth = app.add_subcommand("synthesize", "construct a strictly positive density with the requested moments");
  c_synth->add_option("problem", in_path, "problem JSON")->required();
  c_synth->add_option("-o,--output", out_path, "density JSON output path");
  c_synth->add_option("--csv", csv_path, "also write a sampled grid as CSV");

  CLI::App* c_mollify = app.add_subcommand("mollify", "smear an atomic measure into a density");
  c_mollify->add_option("measure", in_path, "measure JSON")->required();
  c_mollify->add_option("--eps", eps, "mollification radius in (0,1)")->required();
  c_mollify->add_flag("--ensure-positive", ensure_positive, "add the strict-positivity tail");
  c_mollify->add_option("-o,--output", out_path, "density JSON output path");

  CLI::App* c_perturb = app.add_subcommand("perturb", "shift a density's moments by beta");
  c_perturb->add_option("density", in_path, "density JSON (with index_set)")->required();
  c_perturb->add_option("--beta", beta, "moment increments, one per index")->required();
  c_perturb->add_option("--cells", cells, "perturbation cells");
  c_perturb->add_option("--degree", degree, "index set: all indices of total degree <= D");
  c_perturb->add_option("-o,--output", out_path, "density JSON output path");

  CLI::App* c_moments = app.add_subcommand("moments", "moments of a measure or density file");
  c_moments->add_option("input", in_path, "measure or density JSON")->required();
  c_moments->add_option("--degree", degree, "index set: all indices of total degree <= D");

  CLI::App* c_probe = app.add_subcommand("probe-regularity", "sample local volumes near the support boundary");
  c_probe->add_option("region", in_path, "region JSON")->required();
  c_probe->add_option("--samples", samples, "probe points");
  c_probe->add_option("--eps", probe_eps, "radii to test");

  CLI::App* c_close = app.add_subcommand("close-index-set", "smallest regular superset of a problem's index set");
  c_close->add_option("problem", in_path, "problem JSON")->required();

  for (CLI::App* s : app.get_subcommands([](const CLI::App*) { return true; }))
    s->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);  // prints help or the parse error
    return rc == 0 ? 0 : 64;
  }

  if (c_certify->parsed()) {
    mc::ProblemFile pf = mc::load_problem(mc::load_json_file(in_path));
    mc::SynthesisParams p = apply_overrides(pf.params, g, true);
    mc::PositivityCertificate cert = mc::certify(pf.moments, pf.support, p.certify);
    std::string human = std::string("verdict: ") + mc::to_string(cert.verdict) +
                        (cert.converged ? "" : " (not converged)") +
                        "\nmargin: " + std::to_string(cert.margin) +
                        "\ncuts: " + std::to_string(cert.cuts_used) + "\n";
    emit(g, mc::certificate_to_json(cert), human);
    return verdict_code(cert.verdict, cert.converged);
  }

  if (c_classify->parsed()) {
    mc::ProblemFile pf = mc::load_problem(mc::load_json_file(in_path));
    mc::SynthesisParams p = apply_overrides(pf.params, g, true);
    mc::Classification cls = mc::classify(pf.moments, pf.support, p);
    std::string human = std::string("verdict: ") + mc::to_string(cls.verdict) + "\n";
    if (!cls.diagnostics.empty()) human += "diagnostics: " + cls.diagnostics + "\n";
    emit(g, mc::classification_to_json(cls), human);
    return verdict_code(cls.verdict);
  }

  if (c_synth->parsed()) {
    mc::ProblemFile pf = mc::load_problem(mc::load_json_file(in_path));
    mc::SynthesisParams p = apply_overrides(pf.params, g, false);
    mc::BuildResult built = mc::build_density(pf.moments, pf.support, p);
    json dj = mc::density_to_json(built.density);
    dj["index_set"] = mc::index_set_to_json(pf.moments.index_set);
    json report;
    report["eps"] = built.eps;
    report["delta"] = built.correction.delta;
    report["k"] = built.correction.k;
    report["u_inf"] = built.correction.u_inf;
    report["v_inf"] = built.correction.v_inf;
    report["moments"] = json(built.correction.moments_after);
    report["max_moment_error"] = built.max_moment_error;
    json payload;
    payload["density"] = dj;
    payload["report"] = report;
    if (!out_path.empty()) write_output(out_path, dj);
    if (!csv_path.empty()) write_density_csv(csv_path, built.density, g.resolution);
    emit(g, payload,
         "density built: eps=" + std::to_string(built.eps) +
             ", max moment error=" + std::to_string(built.max_moment_error) +
             (out_path.empty() ? "" : ", written to " + out_path) + "\n");
    return 0;
  }

  if (c_mollify->parsed()) {
    mc::MeasureFile mf = mc::load_measure(mc::load_json_file(in_path));
    mc::Density d = mc::mollify(mf.measure, mf.support, eps, ensure_positive);
    json dj = mc::density_to_json(d);
    if (mf.index_set) dj["index_set"] = mc::index_set_to_json(*mf.index_set);
    if (!out_path.empty()) write_output(out_path, dj);
    emit(g, dj, "mollified density with " + std::to_string(d.components().size()) +
                    " components" +
                    (out_path.empty() ? "" : ", written to " + out_path) + "\n");
    return 0;
  }

  if (c_perturb->parsed()) {
    mc::DensityFile df = mc::load_density(mc::load_json_file(in_path));
    mc::IndexSet I = index_set_for(df.index_set, degree, df.density.dim());
    if (beta.size() != I.size())
      throw mc::InvalidInput("beta has " + std::to_string(beta.size()) +
                             " entries for " + std::to_string(I.size()) +
                             " indices");
    int n = df.density.dim();
    int use_cells = cells > 0 ? cells : (n == 1 ? 8 : 25);
    mc::PerturbationPlan plan =
        mc::plan_perturbation(df.density, df.density.support(), I, use_cells);
    mc::PerturbResult res =
        mc::perturb(df.density, plan, beta, g.tol > 0 ? g.tol : -1.0, g.seed);
    json dj = mc::density_to_json(res.density);
    dj["index_set"] = mc::index_set_to_json(I);
    json report;
    report["delta"] = res.delta;
    report["k"] = res.k;
    report["u_inf"] = res.u_inf;
    report["v_inf"] = res.v_inf;
    report["radius_estimate"] = plan.radius_estimate;
    report["moments_before"] = json(res.moments_before);
    report["moments_after"] = json(res.moments_after);
    report["max_moment_error"] = res.max_moment_error;
    json payload;
    payload["density"] = dj;
    payload["report"] = report;
    if (!out_path.empty()) write_output(out_path, dj);
    emit(g, payload,
         "perturbed: max moment error=" + std::to_string(res.max_moment_error) +
             ", delta=" + std::to_string(res.delta) + ", k=" + std::to_string(res.k) +
             (out_path.empty() ? "" : ", written to " + out_path) + "\n");
    return 0;
  }

  if (c_moments->parsed()) {
    json j = mc::load_json_file(in_path);
    if (j.contains("atoms")) {
      mc::MeasureFile mf = mc::load_measure(j);
      mc::IndexSet I = index_set_for(mf.index_set, degree, mf.measure.dim);
      mc::MomentVector m = mc::atomic_moments(mf.measure, I);
      emit(g, moments_json(I, m.values), [&] {
        std::string s;
        for (double v : m.values) s += std::to_string(v) + "\n";
        return s;
      }());
    } else {
      mc::DensityFile df = mc::load_density(j);
      mc::IndexSet I = index_set_for(df.index_set, degree, df.density.dim());
      double tol = g.tol > 0 ? g.tol : mc::default_quad_tol(df.density.dim());
      mc::MomentVector m = mc::density_moments(df.density, I, tol, g.seed);
      emit(g, moments_json(I, m.values), [&] {
        std::string s;
        for (double v : m.values) s += std::to_string(v) + "\n";
        return s;
      }());
    }
    return 0;
  }

  if (c_probe->parsed()) {
    mc::SupportRegion T = mc::region_from_json(mc::load_json_file(in_path));
    mc::ProbeReport rep = mc::regularity_probe(T, samples, probe_eps, g.seed);
    json j;
    j["num_samples"] = rep.num_samples;
    j["epsilons"] = json(rep.epsilons);
    json minima = json::array();
    for (const auto& s : rep.minima) {
      json e;
      e["at"] = json(s.at);
      e["eps"] = s.eps;
      e["volume"] = s.volume;
      minima.push_back(std::move(e));
    }
    j["minima"] = std::move(minima);
    json viols = json::array();
    for (const auto& s : rep.violations) {
      json e;
      e["at"] = json(s.at);
      e["eps"] = s.eps;
      e["volume"] = s.volume;
      viols.push_back(std::move(e));
    }
    j["violations"] = std::move(viols);
    j["note"] = rep.note;
    emit(g, j,
         "probed " + std::to_string(rep.num_samples) + " points; " +
             std::to_string(rep.violations.size()) + " violations\n");
    return rep.violations.empty() ? 0 : 1;
  }

  if (c_close->parsed()) {
    json j = mc::load_json_file(in_path);
    if (!j.contains("dim") || !j.contains("index_set"))
      throw mc::InvalidInput("expected 'dim' and 'index_set' fields");
    int dim = j.at("dim").get<int>();
    std::vector<mc::MultiIndex> raw;
    for (const auto& e : j.at("index_set")) {
      mc::MultiIndex mi;
      for (const auto& x : e) mi.push_back(x.get<int>());
      raw.push_back(std::move(mi));
    }
    mc::IndexSet closed = mc::close_index_set(dim, raw);
    json added = json::array();
    for (const mc::MultiIndex& i : closed.indices()) {
      bool had = false;
      for (const auto& r : raw) had = had || r == i;
      if (!had) added.push_back(json(i));
    }
    json payload;
    payload["dim"] = dim;
    payload["index_set"] = mc::index_set_to_json(closed);
    payload["added_indices"] = std::move(added);
    emit(g, payload,
         "closed set has " + std::to_string(closed.size()) + " indices (" +
             std::to_string(added.size()) + " added)\n");
    return 0;
  }

  return 64;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOpts fallback;
  for (int i = 1; i < argc; ++i)
    if (std::string(argv[i]) == "--json") fallback.machine = true;
  try {
    return run(argc, argv);
  } catch (const mc::InvalidInput& ex) {
    return emit_error(fallback, ex.kind(), ex.what(), 65);
  } catch (const mc::MomentError& ex) {
    return emit_error(fallback, ex.kind(), ex.what(), 70);
  } catch (const std::exception& ex) {
    return emit_error(fallback, "internal", ex.what(), 70);
  }
}
