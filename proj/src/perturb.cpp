#include "momentcone/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "momentcone/errors.hpp"
#include "momentcone/lp.hpp"

namespace mcone {

namespace {

// Conservative "cell lies inside T" test: exact for box, union and ball
// shapes (balls are convex, so corner containment suffices); for
// semialgebraic shapes corners + center + face midpoints are sampled.
bool cell_inside(const SupportRegion& T, const Box& cell) {
  const int n = T.dim();
  std::vector<Point> probes;
  const int corners = 1 << n;
  for (int mask = 0; mask < corners; ++mask) {
    Point t(n);
    for (int k = 0; k < n; ++k)
      t[k] = (mask >> k) & 1 ? cell.hi[k] : cell.lo[k];
    probes.push_back(std::move(t));
  }
  if (std::holds_alternative<SemialgebraicShape>(T.shape())) {
    probes.push_back(cell.center());
    for (int k = 0; k < n; ++k) {
      Point a = cell.center(), b = cell.center();
      a[k] = cell.lo[k];
      b[k] = cell.hi[k];
      probes.push_back(std::move(a));
      probes.push_back(std::move(b));
    }
  }
  if (const auto* u = std::get_if<UnionShape>(&T.shape())) {
    // must sit inside a single member (corners in different members would
    // pass the pointwise test while the cell straddles a gap)
    for (const Box& m : u->boxes) {
      bool in = true;
      for (int k = 0; k < n && in; ++k)
        in = cell.lo[k] >= m.lo[k] - 1e-12 && cell.hi[k] <= m.hi[k] + 1e-12;
      if (in) return true;
    }
    return false;
  }
  for (const Point& t : probes)
    if (!T.contains(t)) return false;
  return true;
}

struct Family {
  std::vector<Box> cells;       // candidate disjoint cells inside T
};

// Tensor partition of the bounding box, refined until at least `want`
// cells lie fully inside T.
Family tensor_family(const SupportRegion& T, int want) {
  const int n = T.dim();
  Box bbox = T.bounding_box();
  int base = std::max(1, static_cast<int>(std::ceil(
                             std::pow(static_cast<double>(want), 1.0 / n))));
  Family fam;
  for (int res = base; res <= base + 64; ++res) {
    fam.cells.clear();
    std::vector<int> idx(n, 0);
    auto edge = [&](int k, int j) {
      if (j == res) return bbox.hi[k];
      return bbox.lo[k] + (bbox.hi[k] - bbox.lo[k]) * j / res;
    };
    while (true) {
      Box cell{Point(n), Point(n)};
      for (int k = 0; k < n; ++k) {
        cell.lo[k] = edge(k, idx[k]);
        cell.hi[k] = edge(k, idx[k] + 1);
      }
      if (cell_inside(T, cell)) fam.cells.push_back(cell);
      int k = n - 1;
      while (k >= 0 && ++idx[k] == res) idx[k--] = 0;
      if (k < 0) break;
    }
    if (static_cast<int>(fam.cells.size()) >= want) return fam;
  }
  return fam;  // possibly short; caller copes
}

// Tilings of boxes inscribed in f's ball components (where a mollified
// density is largest).  Overlapping inscriptions are dropped deterministically.
Family ball_family(const Density& f, const SupportRegion& T, int want) {
  const int n = f.dim();
  std::vector<Box> bases;
  for (const auto& comp : f.components()) {
    const auto* b = std::get_if<BallComponent>(&comp);
    if (!b || b->scale <= 0.0 || b->radius <= 0.0) continue;
    double half = b->radius / std::sqrt(static_cast<double>(n));
    Box box{Point(n), Point(n)};
    for (int k = 0; k < n; ++k) {
      box.lo[k] = b->center[k] - half;
      box.hi[k] = b->center[k] + half;
    }
    // shrink toward the center until inside T (atoms near the boundary)
    bool ok = false;
    for (int s = 0; s < 8; ++s) {
      if (cell_inside(T, box)) {
        ok = true;
        break;
      }
      for (int k = 0; k < n; ++k) {
        double c = b->center[k];
        box.lo[k] = c + (box.lo[k] - c) * 0.7;
        box.hi[k] = c + (box.hi[k] - c) * 0.7;
      }
    }
    if (!ok) continue;
    bool overlap = false;
    for (const Box& prev : bases) {
      bool disjoint = false;
      for (int k = 0; k < n && !disjoint; ++k)
        disjoint = box.hi[k] <= prev.lo[k] || box.lo[k] >= prev.hi[k];
      if (!disjoint) {
        overlap = true;
        break;
      }
    }
    if (!overlap) bases.push_back(box);
  }
  Family fam;
  if (bases.empty()) return fam;
  int per = std::max(1, static_cast<int>(std::ceil(std::pow(
                            static_cast<double>(want) / bases.size(), 1.0 / n))));
  for (const Box& base : bases) {
    std::vector<int> idx(n, 0);
    while (true) {
      Box cell{Point(n), Point(n)};
      for (int k = 0; k < n; ++k) {
        double w = (base.hi[k] - base.lo[k]) / per;
        cell.lo[k] = base.lo[k] + w * idx[k];
        cell.hi[k] = idx[k] + 1 == per ? base.hi[k] : base.lo[k] + w * (idx[k] + 1);
      }
      fam.cells.push_back(cell);
      int k = n - 1;
      while (k >= 0 && ++idx[k] == per) idx[k--] = 0;
      if (k < 0) break;
    }
  }
  return fam;
}

struct Scored {
  bool ok = false;
  double delta = 0.0;
  std::vector<Box> t_star;
  std::vector<std::vector<double>> A;
  double radius = 0.0;
};

Scored score_family(const Family& fam, const Density& f, const IndexSet& I,
                    int want, double sup) {
  Scored s;
  if (fam.cells.empty()) return s;
  const int N = static_cast<int>(I.size());
  std::vector<double> mins(fam.cells.size());
  for (std::size_t j = 0; j < fam.cells.size(); ++j)
    mins[j] = f.min_on_box(fam.cells[j]);
  for (int m = 0; m <= 60; ++m) {
    double delta = sup / std::pow(2.0, m);
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < mins.size(); ++j)
      if (mins[j] >= delta) keep.push_back(j);
    if (static_cast<int>(keep.size()) < std::max(want, N)) continue;
    s.delta = delta;
    for (std::size_t j : keep) s.t_star.push_back(fam.cells[j]);
    break;
  }
  if (s.t_star.empty()) return s;
  const int M = static_cast<int>(s.t_star.size());
  s.A.assign(N, std::vector<double>(M));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < M; ++j)
      s.A[i][j] = detail::cell_monomial_integral(s.t_star[j], I[i]);
  double worst = 0.0;
  try {
    for (int i = 0; i < N; ++i) {
      std::vector<double> e(N, 0.0);
      e[i] = 1.0;
      std::vector<double> u = min_sup_norm_solve(s.A, e);
      for (double x : u) worst = std::max(worst, std::abs(x));
    }
  } catch (const RankDeficient&) {
    return s;  // not ok
  }
  if (worst <= 0.0) return s;
  s.radius = (s.delta / 4.0) / (std::sqrt(static_cast<double>(N)) * worst);
  s.ok = true;
  return s;
}

}  // namespace

PerturbationPlan plan_perturbation(const Density& f, const SupportRegion& T,
                                   const IndexSet& I, int cells) {
  if (I.dim() != T.dim() || f.dim() != T.dim())
    throw InvalidInput("plan_perturbation: dimension mismatch");
  if (cells < 1) throw InvalidInput("plan_perturbation: cells < 1");
  double sup = f.sup_bound();
  if (!(sup > 1e-12))
    throw DegenerateDensity("plan_perturbation: density is numerically zero");

  Scored a = score_family(tensor_family(T, cells), f, I, cells, sup);
  Scored b = score_family(ball_family(f, T, cells), f, I, cells, sup);
  const Scored* pick = nullptr;
  if (a.ok && (!b.ok || a.radius >= b.radius)) pick = &a;
  else if (b.ok) pick = &b;
  if (!pick) {
    if (a.t_star.empty() && b.t_star.empty())
      throw DegenerateDensity(
          "plan_perturbation: no cell family reaches the requested count at "
          "any threshold; density too close to zero");
    throw RankDeficient(
        "plan_perturbation: cell moment matrix is rank deficient; retry with "
        "more cells");
  }
  PerturbationPlan plan;
  plan.index_set = I;
  plan.t_star = pick->t_star;
  plan.delta = pick->delta;
  plan.cell_moment_matrix = pick->A;
  plan.radius_estimate = pick->radius;
  return plan;
}

PerturbResult perturb(const Density& f, const PerturbationPlan& plan,
                      const std::vector<double>& beta, double tol,
                      std::uint64_t seed) {
  const int N = static_cast<int>(plan.index_set.size());
  const int M = static_cast<int>(plan.t_star.size());
  if (static_cast<int>(beta.size()) != N)
    throw InvalidInput("perturb: beta length does not match the plan");
  if (f.dim() != plan.index_set.dim())
    throw InvalidInput("perturb: dimension mismatch");
  if (M == 0 || plan.delta <= 0.0)
    throw InvalidInput("perturb: plan has no cells");
  if (tol <= 0.0)
    tol = f.dim() == 1 ? 1e-8 : 1e-7;

  const SupportRegion& T = f.support();
  std::vector<double> before =
      density_moments(f, plan.index_set, tol, seed).values;
  // moments of the unit tail e^{-|t|} over T; the k-tail contributes tau / k
  std::vector<double> tau =
      density_moments(Density(T, {ExpTailComponent{1.0}}), plan.index_set, tol,
                      seed)
          .values;

  std::vector<double> u1 = min_sup_norm_solve(plan.cell_moment_matrix, tau);
  double u1_inf = 0.0;
  for (double x : u1) u1_inf = std::max(u1_inf, std::abs(x));

  // k chosen so the clip min(f, k) never binds and the tail correction u =
  // u1 / k (exact scaling of the min-norm solution) obeys the delta/4 cap
  const double kmax = 1048576.0;  // 2^20
  double k;
  if (plan.k > 0) {
    k = plan.k;
    if (k < f.sup_bound())
      throw InvalidInput("perturb: plan.k below sup f; the clip would bind");
    if (u1_inf / k >= plan.delta / 4.0)
      throw KExhausted("perturb: the plan's fixed k violates the delta/4 cap");
  } else {
    k = std::max(1.0, std::ceil(std::max(plan.delta, 2.0 * f.sup_bound())));
    while (u1_inf / k >= plan.delta / 4.0) {
      k *= 2.0;
      if (k > kmax)
        throw KExhausted("perturb: no truncation level up to 2^20 brings the "
                         "tail correction under delta/4 (delta = " +
                         std::to_string(plan.delta) + ")");
    }
  }

  std::vector<double> v(M, 0.0);
  bool beta_zero = true;
  for (double x : beta) beta_zero = beta_zero && x == 0.0;
  if (!beta_zero) v = min_sup_norm_solve(plan.cell_moment_matrix, beta);
  double v_inf = 0.0;
  for (double x : v) v_inf = std::max(v_inf, std::abs(x));
  if (v_inf >= plan.delta / 4.0)
    throw BetaTooLarge("perturb: beta needs a correction of sup norm " +
                       std::to_string(v_inf) + " >= delta/4 = " +
                       std::to_string(plan.delta / 4.0) +
                       "; shrink beta or rebuild the plan");

  std::vector<double> corr(M);
  for (int j = 0; j < M; ++j) corr[j] = -u1[j] / k + v[j];
  std::vector<DensityComponent> parts = f.components();
  parts.push_back(ExpTailComponent{1.0 / k});
  parts.push_back(CellsComponent{plan.t_star, corr});

  PerturbResult out{Density(SupportRegion(T), std::move(parts)),
                    plan.delta,
                    static_cast<int>(k),
                    u1_inf / k,
                    v_inf,
                    std::move(before),
                    {},
                    0.0};
  out.moments_after =
      density_moments(out.density, plan.index_set, tol, seed).values;
  for (int i = 0; i < N; ++i)
    out.max_moment_error =
        std::max(out.max_moment_error,
                 std::abs(out.moments_after[i] - out.moments_before[i] - beta[i]));
  return out;
}

}  // namespace mcone
