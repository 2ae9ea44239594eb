#include "momentcone/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace mcone {

namespace {

struct Ctx {
  const std::function<double(double)>& f;
  double tol;
  int max_depth;
  bool converged = true;
  double error = 0.0;
};

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(Ctx& ctx, double a, double b, double fa, double fm, double fb,
             double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = ctx.f(lm), frm = ctx.f(rm);
  double left = simpson(fa, flm, fm, m - a);
  double right = simpson(fm, frm, fb, b - m);
  double diff = left + right - whole;
  if (std::abs(diff) <= 15.0 * tol || depth >= ctx.max_depth) {
    if (std::abs(diff) > 15.0 * tol) ctx.converged = false;
    ctx.error += std::abs(diff) / 15.0;
    return left + right + diff / 15.0;
  }
  return adapt(ctx, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adapt(ctx, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, double tol, int max_depth) {
  if (!(b > a)) return {0.0, 0.0, true};
  Ctx ctx{f, tol, max_depth};
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = simpson(fa, fm, fb, b - a);
  double v = adapt(ctx, a, b, fa, fm, fb, whole, tol, 0);
  return {v, ctx.error, ctx.converged};
}

QuadResult integrate_with_breakpoints(const std::function<double(double)>& f,
                                      const std::vector<double>& breakpoints,
                                      double tol, int max_depth) {
  QuadResult total;
  if (breakpoints.size() < 2) return total;
  std::size_t pieces = breakpoints.size() - 1;
  for (std::size_t k = 0; k < pieces; ++k) {
    double a = breakpoints[k], b = breakpoints[k + 1];
    if (!(b - a > 1e-15)) continue;
    // Breakpoints often sit exactly on jump discontinuities (region edges),
    // where only the one-sided limit belongs to this piece.  Evaluating the
    // endpoints strictly inside keeps the per-piece integrand continuous; the
    // omitted sliver contributes O(|f| * 1e-12 * (b - a)).
    double inset = 1e-12 * (b - a);
    QuadResult r = integrate_adaptive(f, a + inset, b - inset,
                                      tol / static_cast<double>(pieces), max_depth);
    total.value += r.value;
    total.error += r.error;
    total.converged = total.converged && r.converged;
  }
  return total;
}

double monomial_exp_integral(int i, double a, double b) {
  // F(t) = -e^{-t} sum_{r=0}^{i} (i!/(i-r)!) t^{i-r};  F'(t) = t^i e^{-t}.
  auto F = [i](double t) {
    double sum = 0.0, fall = 1.0;  // fall = i! / (i-r)!
    for (int r = 0; r <= i; ++r) {
      double tp = 1.0;
      for (int e = 0; e < i - r; ++e) tp *= t;
      sum += fall * tp;
      fall *= (i - r);
    }
    return -std::exp(-t) * sum;
  };
  return F(b) - F(a);
}

}  // namespace mcone
