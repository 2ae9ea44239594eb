#include "momentcone/certify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "momentcone/errors.hpp"
#include "momentcone/lp.hpp"
#include "momentcone/multiindex.hpp"

namespace mcone {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::StrictlyPositive: return "StrictlyPositive";
    case Verdict::Degenerate: return "Degenerate";
    case Verdict::NegativeWitness: return "NegativeWitness";
  }
  return "?";
}

MinPolyResult min_poly_on_region(const Polynomial& p, const SupportRegion& T,
                                 int resolution) {
  if (resolution < 2) throw InvalidInput("min_poly_on_region: resolution < 2");
  if (p.index_set.dim() != T.dim())
    throw InvalidInput("min_poly_on_region: dimension mismatch");
  SampleGrid grid = sample_grid(T, resolution);

  Point best = grid.points.front();
  double best_val = eval_poly(p, best);
  for (std::size_t k = 1; k < grid.points.size(); ++k) {
    double v = eval_poly(p, grid.points[k]);
    if (v < best_val) {
      best_val = v;
      best = grid.points[k];
    }
  }

  Box bbox = T.bounding_box();
  const int n = T.dim();
  std::vector<double> h(n);
  for (int k = 0; k < n; ++k)
    h[k] = (bbox.hi[k] - bbox.lo[k]) / static_cast<double>(resolution);

  for (int round = 0; round < 30; ++round) {
    for (int move = 0; move < 64; ++move) {
      int arg_k = -1;
      double arg_d = 0.0, cand_val = best_val;
      for (int k = 0; k < n; ++k) {
        for (double d : {-h[k], h[k]}) {
          Point t = best;
          t[k] += d;
          if (!T.contains(t)) continue;
          double v = eval_poly(p, t);
          if (v < cand_val) {
            cand_val = v;
            arg_k = k;
            arg_d = d;
          }
        }
      }
      if (arg_k < 0) break;
      best[arg_k] += arg_d;
      best_val = cand_val;
    }
    for (int k = 0; k < n; ++k) h[k] /= 3.0;
  }
  return {best, best_val};
}

namespace {

// Minimum of riesz(g, p) over {p(t) >= 0 for t in S, |coeffs|_1 = 1},
// restricted to one coefficient sign orthant.  On the orthant the sphere is
// the simplex {x >= 0, sum x = 1} with c_i = s_i x_i, so the piece is the LP
//   min sum_i (s_i g_i) x_i   s.t.  sum_i x_i = 1,
//                                   sum_i s_i t^i x_i >= 0  (t in S).
// We solve its dual (one free variable + one multiplier per sample point, but
// only |I| constraint rows) and read the simplex weights x off the row duals.
struct OrthantResult {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;  // simplex weights, sum 1
};

OrthantResult solve_orthant(const std::vector<double>& sg,
                            const std::vector<std::vector<double>>& mono,
                            const std::vector<int>& sign) {
  const int N = static_cast<int>(sg.size());
  const int S = static_cast<int>(mono.size());
  LinearProgram lp(1 + S);  // y0 free, lambda_t >= 0
  lp.objective[0] = -1.0;   // maximize y0
  for (int t = 0; t < S; ++t) lp.lower[1 + t] = 0.0;
  for (int i = 0; i < N; ++i) {
    std::vector<double> row(1 + S, 0.0);
    row[0] = -1.0;
    for (int t = 0; t < S; ++t) row[1 + t] = -sign[i] * mono[t][i];
    lp.add_ge(std::move(row), -sg[i]);
  }
  LpSolution sol = solve(lp);
  OrthantResult out;
  if (sol.status == LpStatus::Unbounded) return out;  // orthant has no p >= 0 on S
  if (sol.status != LpStatus::Optimal)
    throw NumericalBreakdown("certify: orthant LP not optimal");
  out.feasible = true;
  out.value = -sol.objective;
  out.x.assign(N, 0.0);
  double total = 0.0;
  for (int i = 0; i < N; ++i) {
    out.x[i] = std::max(sol.ge_duals[i], 0.0);
    total += out.x[i];
  }
  if (total <= 0.0)
    throw NumericalBreakdown("certify: degenerate dual weights");
  for (int i = 0; i < N; ++i) out.x[i] /= total;
  return out;
}

struct SphereMin {
  double value = kInf;
  std::vector<double> coeffs;
};

// Exact minimum over the full l1 sphere subject to p >= 0 on S: best orthant
// wins, enumerated in a fixed order with a simplex lower bound for pruning.
SphereMin min_over_sphere(const std::vector<double>& g,
                          const std::vector<std::vector<double>>& mono) {
  const int N = static_cast<int>(g.size());
  SphereMin best;
  std::vector<int> sign(N);
  std::vector<double> sg(N);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << N); ++mask) {
    double bound = kInf;
    for (int i = 0; i < N; ++i) {
      sign[i] = (mask >> i) & 1 ? -1 : 1;
      sg[i] = sign[i] * g[i];
      bound = std::min(bound, sg[i]);
    }
    if (bound >= best.value) continue;  // cannot beat the incumbent
    OrthantResult r = solve_orthant(sg, mono, sign);
    if (!r.feasible) continue;
    if (r.value < best.value) {
      best.value = r.value;
      best.coeffs.assign(N, 0.0);
      for (int i = 0; i < N; ++i) best.coeffs[i] = sign[i] * r.x[i];
    }
  }
  if (!std::isfinite(best.value))
    throw NumericalBreakdown("certify: every orthant infeasible");
  return best;
}

}  // namespace

PositivityCertificate certify(const MomentVector& g, const SupportRegion& T,
                              const CertifyParams& params) {
  require_regular(g.index_set);
  if (g.index_set.dim() != T.dim())
    throw InvalidInput("certify: dimension mismatch between g and T");
  const int N = g.index_set.size();
  if (N > 16)
    throw InvalidInput("certify: index set too large (" + std::to_string(N) +
                       " > 16); orthant enumeration is exponential");
  {
    std::size_t z = g.index_set.find(MultiIndex(T.dim(), 0));
    if (std::abs(g.values[z] - 1.0) > 1e-9)
      throw InvalidInput("certify: moment vector must be normalized (g_0 = 1)");
  }

  const int n = T.dim();
  const int resolution =
      params.resolution > 0 ? params.resolution : (n == 1 ? 512 : 128);
  const int init = params.init_grid > 0 ? params.init_grid : (n == 1 ? 33 : 9);

  PositivityCertificate cert;
  cert.resolution_used = resolution;

  std::vector<Point> S = sample_grid(T, init).points;
  std::vector<std::vector<double>> mono;
  mono.reserve(S.size());
  for (const Point& t : S) {
    std::vector<double> row(N);
    for (int i = 0; i < N; ++i) row[i] = pow_mi(t, g.index_set[i]);
    mono.push_back(std::move(row));
  }

  for (int cut = 0; cut <= params.max_cuts; ++cut) {
    SphereMin m = min_over_sphere(g.values, mono);
    cert.lp_values.push_back(m.value);
    cert.witness = Polynomial(g.index_set, m.coeffs);
    cert.cuts_used = cut;

    MinPolyResult low = min_poly_on_region(cert.witness, T, resolution);
    cert.min_on_T = low.value;
    if (low.value >= -params.eta) {
      cert.converged = true;
      break;
    }
    bool dup = false;
    for (const Point& t : S) {
      double d = 0.0;
      for (int k = 0; k < n; ++k) d = std::max(d, std::abs(t[k] - low.point[k]));
      if (d < 1e-14) {
        dup = true;
        break;
      }
    }
    if (dup) break;  // oracle cannot separate further at this precision
    S.push_back(low.point);
    std::vector<double> row(N);
    for (int i = 0; i < N; ++i) row[i] = pow_mi(low.point, g.index_set[i]);
    mono.push_back(std::move(row));
  }

  cert.riesz_value = riesz_apply(g, cert.witness);
  cert.margin = cert.riesz_value;
  cert.constraint_points = std::move(S);
  if (cert.margin > params.tol_pos)
    cert.verdict = Verdict::StrictlyPositive;
  else if (cert.margin < -params.tol_pos)
    cert.verdict = Verdict::NegativeWitness;
  else
    cert.verdict = Verdict::Degenerate;
  return cert;
}

double brute_force_margin(const MomentVector& g, const SupportRegion& T,
                          int sphere_samples, int resolution) {
  require_regular(g.index_set);
  const int N = g.index_set.size();
  if (N > 5)
    throw InvalidInput("brute_force_margin: index set larger than 5");
  if (sphere_samples < 1) throw InvalidInput("brute_force_margin: no samples");
  const double eta = 1e-7;

  // smallest composition granularity K with enough mesh candidates
  auto mesh_count = [&](int K) {
    double comps = 1.0;  // C(K + N - 1, N - 1)
    for (int r = 1; r <= N - 1; ++r) comps = comps * (K + r) / r;
    return comps * std::pow(2.0, N);
  };
  int K = 1;
  while (mesh_count(K) < sphere_samples && K < 4096) ++K;

  auto feasible = [&](const std::vector<double>& c) {
    return min_poly_on_region(Polynomial(g.index_set, c), T, resolution).value >=
           -eta;
  };
  auto riesz = [&](const std::vector<double>& c) {
    double v = 0.0;
    for (int i = 0; i < N; ++i) v += c[i] * g.values[i];
    return v;
  };

  double best_val = kInf;
  std::vector<double> best_c;

  // enumerate compositions of K into N parts with an odometer
  std::vector<int> comp(N, 0);
  comp[0] = K;
  std::vector<double> c(N);
  while (true) {
    // sign patterns; force + on zero entries to avoid duplicates
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << N); ++mask) {
      bool skip = false;
      for (int i = 0; i < N; ++i)
        if (((mask >> i) & 1) && comp[i] == 0) {
          skip = true;
          break;
        }
      if (skip) continue;
      for (int i = 0; i < N; ++i)
        c[i] = (((mask >> i) & 1) ? -1.0 : 1.0) * comp[i] / K;
      double v = riesz(c);
      if (v >= best_val) continue;  // feasibility check is the expensive part
      if (feasible(c)) {
        best_val = v;
        best_c = c;
      }
    }
    // next composition (lexicographic)
    int j = N - 2;
    while (j >= 0 && comp[j] == 0) --j;
    if (j < 0) break;
    --comp[j];
    int rest = comp[N - 1] + 1;
    comp[N - 1] = 0;
    comp[j + 1] = rest;
  }
  if (best_c.empty()) return kInf;  // no feasible direction on the mesh

  // position of the constant monomial, used to restore feasibility below
  int const_pos = -1;
  for (int i = 0; i < N; ++i) {
    bool zero = true;
    for (int k : g.index_set[i])
      if (k != 0) zero = false;
    if (zero) const_pos = i;
  }

  auto min_value = [&](const std::vector<double>& c) {
    return min_poly_on_region(Polynomial(g.index_set, c), T, resolution).value;
  };

  // polish: transfer magnitude between coordinates at shrinking step sizes
  auto transfers = [&](const std::vector<double>& c, double s) {
    std::vector<std::vector<double>> dirs;
    for (int i = 0; i < N; ++i) {
      if (std::abs(c[i]) < s - 1e-15) continue;
      for (int j = 0; j < N; ++j) {
        if (j == i) continue;
        for (int sj : {1, -1}) {
          if (c[j] != 0.0 && sj != (c[j] > 0 ? 1 : -1)) continue;
          std::vector<double> d(N, 0.0);
          d[i] = c[i] > 0 ? -1.0 : 1.0;
          d[j] = sj;
          dirs.push_back(std::move(d));
        }
      }
    }
    return dirs;
  };

  double step = 1.0 / K;
  for (int round = 0; round < 24; ++round) {
    for (int move = 0; move < 64; ++move) {
      double cand_val = best_val;
      std::vector<double> cand;
      auto consider = [&](const std::vector<double>& d, double scale) {
        std::vector<double> t = best_c;
        double n = 0.0;
        for (int i = 0; i < N; ++i) {
          t[i] += scale * d[i];
          n += std::abs(t[i]);
        }
        if (n < 0.5) return;
        for (double& x : t) x /= n;  // back onto the l1 sphere
        double m = min_value(t);
        if (m < -eta) {
          // steps that graze the nonnegativity boundary are corrected by
          // raising the constant coefficient, which raises the whole
          // polynomial and leaves the minimum location unchanged
          double lift = -0.5 * eta - m;
          if (const_pos < 0 || lift > scale) return;
          t[const_pos] += lift;
          n = 0.0;
          for (double x : t) n += std::abs(x);
          if (n < 0.5) return;
          for (double& x : t) x /= n;
        }
        double v = riesz(t);
        if (v < cand_val - 1e-15) {
          cand_val = v;
          cand = std::move(t);
        }
      };

      std::vector<std::vector<double>> dirs = transfers(best_c, step);
      for (const auto& d : dirs) consider(d, step);
      // when plain transfers stall or barely move, an active constraint is
      // pinning the point; try pairs of transfers mixed with the ratio that
      // keeps the polynomial unchanged at the current minimum, which tracks
      // that constraint edge
      if ((cand.empty() || best_val - cand_val < 0.02 * step) &&
          !dirs.empty()) {
        Point at = min_poly_on_region(Polynomial(g.index_set, best_c), T,
                                      resolution)
                       .point;
        std::vector<double> dp(dirs.size());
        for (std::size_t a = 0; a < dirs.size(); ++a) {
          dp[a] = 0.0;
          for (int i = 0; i < N; ++i)
            if (dirs[a][i] != 0.0)
              dp[a] += dirs[a][i] * pow_mi(at, g.index_set[i]);
        }
        for (std::size_t a = 0; a < dirs.size(); ++a)
          for (std::size_t b = 0; b < dirs.size(); ++b) {
            if (a == b || std::abs(dp[b]) < 1e-12) continue;
            double lambda = -dp[a] / dp[b];
            if (std::abs(lambda) > 64.0) continue;
            std::vector<double> d = dirs[a];
            for (int i = 0; i < N; ++i) d[i] += lambda * dirs[b][i];
            consider(d, step / std::max(1.0, std::abs(lambda)));
          }
      }
      if (cand.empty()) break;
      best_val = cand_val;
      best_c = std::move(cand);
    }
    step /= 3.0;
  }
  return best_val;
}

}  // namespace mcone
