#include "momentcone/mollify.hpp"

#include <cmath>
#include <string>

#include "momentcone/errors.hpp"
#include "momentcone/multiindex.hpp"

namespace mcone {

Density mollify(const AtomicMeasure& nu, const SupportRegion& T, double eps,
                bool ensure_positive) {
  if (!(eps > 0.0 && eps < 1.0))
    throw InvalidInput("mollify: eps must lie in (0, 1), got " +
                       std::to_string(eps));
  if (nu.dim != T.dim()) throw InvalidInput("mollify: dimension mismatch");
  nu.validate_in(T);

  std::vector<DensityComponent> parts;
  parts.reserve(nu.atoms.size() + 1);
  for (const Atom& a : nu.atoms) {
    double v = local_volume(T, a.location, eps);  // throws when degenerate
    parts.push_back(BallComponent{a.location, eps, a.weight / v});
  }
  if (ensure_positive) parts.push_back(ExpTailComponent{eps});
  return Density(SupportRegion(T), std::move(parts));
}

double psi(double eps, const MultiIndex& i, const Point& y,
           const SupportRegion& T, double tol, std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 1.0))
    throw InvalidInput("psi: eps must lie in (0, 1)");
  if (static_cast<int>(i.size()) != T.dim() ||
      static_cast<int>(y.size()) != T.dim())
    throw InvalidInput("psi: dimension mismatch");
  if (!T.contains(y)) throw InvalidInput("psi: y outside the support");
  double v = local_volume(T, y, eps);
  Density d(SupportRegion(T), {BallComponent{y, eps, 1.0 / v}});
  std::vector<MultiIndex> want{MultiIndex(T.dim(), 0)};
  if (degree(i) > 0) want.push_back(i);
  IndexSet one(T.dim(), want);
  if (tol <= 0.0) tol = default_quad_tol(T.dim());
  MomentVector m = density_moments(d, one, tol, seed);
  return m.values[one.find(i)];
}

double error_bound(const AtomicMeasure& nu, double eps, const MultiIndex& i) {
  if (!(eps > 0.0 && eps < 1.0))
    throw InvalidInput("error_bound: eps must lie in (0, 1)");
  if (degree(i) == 0) return 0.0;  // mass is exact
  const int n = static_cast<int>(i.size());
  MultiIndex j(n, 0);
  double sum = 0.0;
  while (true) {
    sum += binomial_product(i, j) * abs_moment(nu, j);
    int k = n - 1;
    while (k >= 0 && j[k] == i[k]) j[k--] = 0;
    if (k < 0) break;
    ++j[k];
  }
  return eps * sum;
}

}  // namespace mcone
