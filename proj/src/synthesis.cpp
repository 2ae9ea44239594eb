#include "momentcone/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "momentcone/errors.hpp"
#include "momentcone/lp.hpp"
#include "momentcone/mollify.hpp"

namespace mcone {

const char* to_string(ClassVerdict v) {
  switch (v) {
    case ClassVerdict::InteriorRepresentable: return "InteriorRepresentable";
    case ClassVerdict::Boundary: return "Boundary";
    case ClassVerdict::NotRepresentable: return "NotRepresentable";
    case ClassVerdict::Unresolved: return "Unresolved";
  }
  return "?";
}

namespace {

// Weight-finding LP shared by the plain and mollified column variants:
// w >= 0 with column_j . w = g for every moment row.
AtomicResult solve_weight_lp(const std::vector<Point>& sites,
                             const std::vector<std::vector<double>>& columns,
                             const std::vector<double>& target, int dim) {
  const int N = static_cast<int>(target.size());
  const int J = static_cast<int>(sites.size());
  LinearProgram lp(J);
  for (int j = 0; j < J; ++j) lp.lower[j] = 0.0;
  for (int i = 0; i < N; ++i) {
    std::vector<double> row(J);
    for (int j = 0; j < J; ++j) row[j] = columns[j][i];
    lp.add_eq(std::move(row), target[i]);
  }
  LpSolution sol = solve(lp);
  AtomicResult out;
  if (sol.status != LpStatus::Optimal) return out;
  out.feasible = true;
  std::vector<Atom> atoms;
  for (int j = 0; j < J; ++j)
    if (sol.x[j] > 1e-11) atoms.push_back({sites[j], sol.x[j]});
  out.measure = AtomicMeasure(dim, std::move(atoms));
  return out;
}

}  // namespace

AtomicResult find_atomic_representation(const MomentVector& g,
                                        const SupportRegion& T,
                                        const SampleGrid& grid) {
  require_regular(g.index_set);
  if (g.index_set.dim() != T.dim())
    throw InvalidInput("find_atomic_representation: dimension mismatch");
  if (grid.points.empty())
    throw InvalidInput("find_atomic_representation: empty grid");
  const int N = static_cast<int>(g.index_set.size());
  std::vector<std::vector<double>> columns(grid.points.size());
  for (std::size_t j = 0; j < grid.points.size(); ++j) {
    columns[j].resize(N);
    for (int i = 0; i < N; ++i)
      columns[j][i] = pow_mi(grid.points[j], g.index_set[i]);
  }
  return solve_weight_lp(grid.points, columns, g.values, T.dim());
}

BuildResult build_density(const MomentVector& g, const SupportRegion& T,
                          const SynthesisParams& params) {
  PositivityCertificate cert = certify(g, T, params.certify);
  if (!cert.converged)
    throw ToleranceNotReached(
        "build_density: positivity certificate did not converge", {});
  if (cert.verdict != Verdict::StrictlyPositive)
    throw NotStrictlyPositive(
        std::string("build_density: certificate verdict is ") +
        to_string(cert.verdict));

  const int n = T.dim();
  const IndexSet& I = g.index_set;
  const int N = static_cast<int>(I.size());
  const int atomic_res =
      params.atomic_resolution > 0 ? params.atomic_resolution : (n == 1 ? 65 : 17);
  const int cells = params.cells > 0 ? params.cells : (n == 1 ? 8 : 25);
  const double tol = params.quad_tol > 0 ? params.quad_tol : 1e-8;
  const double moment_tol =
      params.moment_tol > 0 ? params.moment_tol : (n == 1 ? 1e-6 : 1e-4);

  SampleGrid grid = sample_grid(T, atomic_res);
  // unit-tail moments over T (the eps-tail of the mollified density
  // contributes eps times this vector)
  std::vector<double> tau =
      density_moments(Density(SupportRegion(T), {ExpTailComponent{1.0}}), I,
                      tol, params.seed)
          .values;

  // mollified-bump moment columns are eps-dependent; sites are fixed
  bool any_atomic_feasible = false;
  std::string last_failure = "schedule exhausted before any attempt";

  double eps = params.eps0;
  for (int step = 0; step < params.eps_steps; ++step, eps /= 2.0) {
    // tail-adjusted target: the bumps carry g - eps*tau so bumps + tail hit g
    std::vector<double> target(N);
    bool sane = true;
    for (int i = 0; i < N; ++i) target[i] = g.values[i] - eps * tau[i];
    std::size_t z = I.find(MultiIndex(n, 0));
    if (target[z] <= 0.0) sane = false;
    if (!sane) {
      last_failure = "tail mass exceeds target mass at eps=" + std::to_string(eps);
      continue;
    }

    std::vector<Point> sites;
    std::vector<std::vector<double>> columns;
    for (const Point& y : grid.points) {
      try {
        double v = local_volume(T, y, eps);
        Density bump(SupportRegion(T), {BallComponent{y, eps, 1.0 / v}});
        columns.push_back(density_moments(bump, I, tol, params.seed).values);
        sites.push_back(y);
      } catch (const RegularityViolation&) {
        // unusable site at this radius
      }
    }
    if (sites.empty()) {
      last_failure = "no usable mollification sites at eps=" + std::to_string(eps);
      continue;
    }
    AtomicResult rep = solve_weight_lp(sites, columns, target, n);
    if (!rep.feasible) {
      last_failure =
          "mollified-column LP infeasible at eps=" + std::to_string(eps);
      continue;
    }
    any_atomic_feasible = true;

    try {
      Density cand = mollify(rep.measure, T, eps, true);
      PerturbationPlan plan;
      try {
        plan = plan_perturbation(cand, T, I, cells);
      } catch (const RankDeficient&) {
        plan = plan_perturbation(cand, T, I, 2 * cells);
      }

      std::vector<double> measured =
          density_moments(cand, I, tol, params.seed).values;
      std::vector<double> e(N);
      double e2 = 0.0;
      for (int i = 0; i < N; ++i) {
        e[i] = g.values[i] - measured[i];
        e2 += e[i] * e[i];
      }
      e2 = std::sqrt(e2);

      double bound = 0.0;
      for (int i = 0; i < N; ++i)
        bound += error_bound(rep.measure, eps, I[i]) + eps * std::abs(tau[i]);
      bool pass = bound < plan.radius_estimate / 2.0 ||
                  e2 < 10.0 * plan.radius_estimate;
      if (!pass) {
        last_failure = "moment drift " + std::to_string(e2) +
                       " too large for radius " +
                       std::to_string(plan.radius_estimate) +
                       " at eps=" + std::to_string(eps);
        continue;
      }

      PerturbResult fixed = perturb(cand, plan, e, tol, params.seed);
      double err = 0.0;
      for (int i = 0; i < N; ++i)
        err = std::max(err, std::abs(fixed.moments_after[i] - g.values[i]));
      if (err > moment_tol) {
        last_failure = "final moment error " + std::to_string(err) +
                       " above tolerance at eps=" + std::to_string(eps);
        continue;
      }
      BuildResult out{fixed.density, eps, rep.measure, std::move(fixed), err};
      return out;
    } catch (const BetaTooLarge& ex) {
      last_failure = ex.what();
    } catch (const KExhausted& ex) {
      last_failure = ex.what();
    } catch (const DegenerateDensity& ex) {
      last_failure = ex.what();
    } catch (const RankDeficient& ex) {
      last_failure = ex.what();
    } catch (const RegularityViolation& ex) {
      last_failure = ex.what();
    } catch (const ToleranceNotReached& ex) {
      last_failure = ex.what();
    }
  }
  if (!any_atomic_feasible)
    throw AtomicInfeasible(
        "build_density: no mollification level admits nonnegative bump "
        "weights (atom grid too coarse?); last: " + last_failure);
  throw ToleranceNotReached("build_density: " + last_failure, {});
}

Classification classify(const MomentVector& g, const SupportRegion& T,
                        const SynthesisParams& params) {
  Classification out;
  out.certificate = certify(g, T, params.certify);
  if (!out.certificate.converged) {
    out.verdict = ClassVerdict::Unresolved;
    out.diagnostics = "positivity certificate did not converge within the cut budget";
    return out;
  }
  const int n = T.dim();
  const int atomic_res =
      params.atomic_resolution > 0 ? params.atomic_resolution : (n == 1 ? 65 : 17);
  switch (out.certificate.verdict) {
    case Verdict::StrictlyPositive:
      try {
        BuildResult built = build_density(g, T, params);
        out.density_witness = std::move(built.density);
        out.verdict = ClassVerdict::InteriorRepresentable;
      } catch (const MomentError& ex) {
        out.verdict = ClassVerdict::Unresolved;
        out.diagnostics = ex.what();
      }
      break;
    case Verdict::Degenerate: {
      out.verdict = ClassVerdict::Boundary;
      try {
        AtomicResult rep =
            find_atomic_representation(g, T, sample_grid(T, atomic_res));
        if (rep.feasible) out.atomic_witness = std::move(rep.measure);
      } catch (const MomentError&) {
        // witness is best-effort for boundary verdicts
      }
      break;
    }
    case Verdict::NegativeWitness:
      out.verdict = ClassVerdict::NotRepresentable;
      break;
  }
  return out;
}

}  // namespace mcone
