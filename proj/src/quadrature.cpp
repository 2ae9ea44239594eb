#include "momentcone/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "momentcone/integrate.hpp"
#include "momentcone/qmc.hpp"

namespace mcone {

namespace {

double norm(const Point& t) {
  double s = 0.0;
  for (double v : t) s += v * v;
  return std::sqrt(s);
}

double dist(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

// int_a^b t^p dt
double power_integral(double a, double b, int p) {
  double bp = 1.0, ap = 1.0;
  for (int e = 0; e < p + 1; ++e) {
    bp *= b;
    ap *= a;
  }
  return (bp - ap) / (p + 1);
}

// int_a^b t^p e^{-|t|} dt, any sign of a <= b.
double power_exp_integral(double a, double b, int p) {
  double total = 0.0;
  if (b > 0) {
    double lo = std::max(a, 0.0);
    total += monomial_exp_integral(p, lo, b);
  }
  if (a < 0) {
    double hi = std::min(b, 0.0);
    // substitute u = -t
    double v = monomial_exp_integral(p, -hi, -a);
    total += (p % 2 == 0) ? v : -v;
  }
  return total;
}

double min_box_norm(const Box& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < b.lo.size(); ++k) {
    double m = 0.0;
    if (b.lo[k] > 0)
      m = b.lo[k];
    else if (b.hi[k] < 0)
      m = -b.hi[k];
    s += m * m;
  }
  return std::sqrt(s);
}

double max_box_norm(const Box& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < b.lo.size(); ++k) {
    double m = std::max(std::abs(b.lo[k]), std::abs(b.hi[k]));
    s += m * m;
  }
  return std::sqrt(s);
}

double max_corner_dist(const Box& cell, const Point& c) {
  double s = 0.0;
  for (std::size_t k = 0; k < cell.lo.size(); ++k) {
    double m = std::max(std::abs(cell.lo[k] - c[k]), std::abs(cell.hi[k] - c[k]));
    s += m * m;
  }
  return std::sqrt(s);
}

bool boxes_overlap_interior(const Box& a, const Box& b) {
  for (std::size_t k = 0; k < a.lo.size(); ++k)
    if (std::min(a.hi[k], b.hi[k]) - std::max(a.lo[k], b.lo[k]) <= 1e-14) return false;
  return true;
}

double overlap_volume(const Box& a, const Box& b) {
  double v = 1.0;
  for (std::size_t k = 0; k < a.lo.size(); ++k)
    v *= std::max(0.0, std::min(a.hi[k], b.hi[k]) - std::max(a.lo[k], b.lo[k]));
  return v;
}

bool region_has_exact_2d_slices(const SupportRegion& T) {
  return T.dim() == 2 && !std::holds_alternative<SemialgebraicShape>(T.shape());
}

std::vector<Box> clip_cells_to_region(const std::vector<Box>& cells,
                                      const std::vector<double>& values,
                                      const SupportRegion& T,
                                      std::vector<double>& out_values) {
  std::vector<Box> out;
  auto clip = [](const Box& cell, const Box& m) {
    Box r = cell;
    bool ok = true;
    for (std::size_t k = 0; k < r.lo.size(); ++k) {
      r.lo[k] = std::max(r.lo[k], m.lo[k]);
      r.hi[k] = std::min(r.hi[k], m.hi[k]);
      if (!(r.hi[k] > r.lo[k])) ok = false;
    }
    return ok ? std::optional<Box>(r) : std::nullopt;
  };
  if (auto* b = std::get_if<Box>(&T.shape())) {
    for (std::size_t j = 0; j < cells.size(); ++j)
      if (auto r = clip(cells[j], *b)) {
        out.push_back(*r);
        out_values.push_back(values[j]);
      }
    return out;
  }
  if (auto* u = std::get_if<UnionShape>(&T.shape())) {
    for (std::size_t j = 0; j < cells.size(); ++j)
      for (const auto& m : u->boxes)
        if (auto r = clip(cells[j], m)) {
          out.push_back(*r);
          out_values.push_back(values[j]);
        }
    return out;
  }
  // Ball / semialgebraic: cells are required to lie inside T (spot-checked).
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const Box& cell = cells[j];
    Point c = cell.center();
    bool inside = T.contains(c);
    int n = cell.dim();
    for (std::uint64_t mask = 0; inside && mask < (std::uint64_t{1} << n); ++mask) {
      Point corner(n);
      for (int k = 0; k < n; ++k)
        corner[k] = (mask & (std::uint64_t{1} << k)) ? cell.hi[k] : cell.lo[k];
      inside = T.contains(corner);
    }
    if (!inside)
      throw InvalidInput("cells component: a cell is not inside the support region");
    out.push_back(cell);
    out_values.push_back(values[j]);
  }
  return out;
}

}  // namespace

AtomicMeasure::AtomicMeasure(int d, std::vector<Atom> a) : dim(d), atoms(std::move(a)) {
  if (dim <= 0) throw InvalidInput("atomic measure dimension must be positive");
  for (const auto& at : atoms) {
    if (static_cast<int>(at.location.size()) != dim)
      throw InvalidInput("atom location dimension mismatch");
    if (!(at.weight > 0)) throw InvalidInput("atom weights must be positive");
  }
}

double AtomicMeasure::mass() const {
  double m = 0.0;
  for (const auto& a : atoms) m += a.weight;
  return m;
}

void AtomicMeasure::validate_in(const SupportRegion& T) const {
  for (const auto& a : atoms)
    if (!T.contains(a.location))
      throw InvalidInput("atom lies outside the support region");
}

Density::Density(SupportRegion support, std::vector<DensityComponent> components)
    : support_(std::move(support)), components_(std::move(components)) {
  for (const auto& comp : components_) {
    if (auto* b = std::get_if<BallComponent>(&comp)) {
      if (static_cast<int>(b->center.size()) != support_.dim())
        throw InvalidInput("ball component dimension mismatch");
      if (!(b->radius > 0) || b->scale < 0)
        throw InvalidInput("ball component needs radius > 0 and scale >= 0");
    } else if (auto* e = std::get_if<ExpTailComponent>(&comp)) {
      if (e->scale < 0) throw InvalidInput("exp tail scale must be >= 0");
    } else {
      const auto& c = std::get<CellsComponent>(comp);
      if (c.cells.size() != c.values.size())
        throw InvalidInput("cells component: cells/values size mismatch");
      for (const auto& cell : c.cells)
        if (cell.dim() != support_.dim())
          throw InvalidInput("cells component dimension mismatch");
      for (std::size_t a = 0; a < c.cells.size(); ++a)
        for (std::size_t b2 = a + 1; b2 < c.cells.size(); ++b2)
          if (boxes_overlap_interior(c.cells[a], c.cells[b2]))
            throw InvalidInput("cells component: cells overlap");
    }
  }
}

double Density::value(const Point& t) const {
  if (!support_.contains(t)) return 0.0;
  double v = 0.0;
  for (const auto& comp : components_) {
    if (auto* b = std::get_if<BallComponent>(&comp)) {
      if (dist(t, b->center) < b->radius) v += b->scale;
    } else if (auto* e = std::get_if<ExpTailComponent>(&comp)) {
      v += e->scale * std::exp(-norm(t));
    } else {
      const auto& c = std::get<CellsComponent>(comp);
      // half-open cells avoid double counting on shared faces
      int hit = -1;
      for (std::size_t j = 0; j < c.cells.size() && hit < 0; ++j) {
        bool in = true;
        for (int k = 0; k < c.cells[j].dim() && in; ++k)
          in = t[k] >= c.cells[j].lo[k] && t[k] < c.cells[j].hi[k];
        if (in) hit = static_cast<int>(j);
      }
      for (std::size_t j = 0; j < c.cells.size() && hit < 0; ++j)
        if (c.cells[j].contains(t)) hit = static_cast<int>(j);
      if (hit >= 0) v += c.values[hit];
    }
  }
  return v;
}

double Density::sup_bound() const {
  double s = 0.0;
  double tail_peak = std::exp(-min_box_norm(support_.bounding_box()));
  for (const auto& comp : components_) {
    if (auto* b = std::get_if<BallComponent>(&comp))
      s += b->scale;
    else if (auto* e = std::get_if<ExpTailComponent>(&comp))
      s += e->scale * tail_peak;
    else {
      const auto& c = std::get<CellsComponent>(comp);
      double m = 0.0;
      for (double v : c.values) m = std::max(m, v);
      s += m;
    }
  }
  return s;
}

double Density::min_on_box(const Box& cell) const {
  double s = 0.0;
  for (const auto& comp : components_) {
    if (auto* b = std::get_if<BallComponent>(&comp)) {
      if (max_corner_dist(cell, b->center) < b->radius) s += b->scale;
      // otherwise part of the cell is outside the ball: contributes 0 to the min
    } else if (auto* e = std::get_if<ExpTailComponent>(&comp)) {
      s += e->scale * std::exp(-max_box_norm(cell));
    } else {
      const auto& c = std::get<CellsComponent>(comp);
      double vol = cell.volume(), covered = 0.0;
      double m = std::numeric_limits<double>::infinity();
      bool any = false;
      for (std::size_t j = 0; j < c.cells.size(); ++j) {
        double ov = overlap_volume(cell, c.cells[j]);
        if (ov > 1e-14 * std::max(vol, 1e-300)) {
          covered += ov;
          m = std::min(m, c.values[j]);
          any = true;
        }
      }
      if (!any)
        m = 0.0;
      else if (covered < vol * (1.0 - 1e-9))
        m = std::min(m, 0.0);  // partially uncovered
      s += m;
    }
  }
  return s;
}

MomentVector atomic_moments(const AtomicMeasure& nu, const IndexSet& I) {
  std::vector<double> v(I.size(), 0.0);
  for (std::size_t k = 0; k < I.size(); ++k)
    for (const auto& a : nu.atoms) v[k] += a.weight * pow_mi(a.location, I[k]);
  return MomentVector(I, std::move(v));
}

double abs_moment(const AtomicMeasure& nu, const MultiIndex& j) {
  double s = 0.0;
  for (const auto& a : nu.atoms) s += a.weight * abs_pow_mi(a.location, j);
  return s;
}

double default_quad_tol(int dim) { return dim == 1 ? 1e-8 : 1e-5; }

namespace detail {

double cell_monomial_integral(const Box& cell, const MultiIndex& i) {
  double v = 1.0;
  for (std::size_t k = 0; k < cell.lo.size(); ++k)
    v *= power_integral(cell.lo[k], cell.hi[k], i[k]);
  return v;
}

double ball_moment_1d_closed(const BallComponent& c, const SupportRegion& T,
                             const MultiIndex& i) {
  double a = c.center[0] - c.radius, b = c.center[0] + c.radius;
  double s = 0.0;
  for (const auto& [lo, hi] : intervals_1d(T)) {
    double x0 = std::max(lo, a), x1 = std::min(hi, b);
    if (x1 > x0) s += power_integral(x0, x1, i[0]);
  }
  return c.scale * s;
}

double component_moment_adaptive(const DensityComponent& comp, const SupportRegion& T,
                                 const MultiIndex& i, double tol, bool& converged) {
  if (auto* bc = std::get_if<BallComponent>(&comp)) {
    if (T.dim() == 1) {
      // adaptive route kept for cross-checking the closed form
      auto f = [&](double x) {
        Point t{x};
        return (std::abs(x - bc->center[0]) < bc->radius && T.contains(t))
                   ? bc->scale * pow_mi(t, i)
                   : 0.0;
      };
      std::vector<double> bp;
      for (const auto& [lo, hi] : intervals_1d(T)) {
        bp.push_back(lo);
        bp.push_back(hi);
      }
      bp.push_back(bc->center[0] - bc->radius);
      bp.push_back(bc->center[0] + bc->radius);
      std::sort(bp.begin(), bp.end());
      QuadResult r = integrate_with_breakpoints(f, bp, tol * 0.25);
      converged = converged && r.converged;
      return r.value;
    }
    // 2D: closed-form inner power integral across the chord overlap.
    auto integrand = [&](double x) {
      double d = bc->radius * bc->radius - (x - bc->center[0]) * (x - bc->center[0]);
      if (d <= 0) return 0.0;
      double h = std::sqrt(d);
      double xa = bc->center[1] - h, xb = bc->center[1] + h;
      double inner = 0.0;
      for (const auto& [lo, hi] : slice_intervals_2d(T, x)) {
        double y0 = std::max(lo, xa), y1 = std::min(hi, xb);
        if (y1 > y0) inner += power_integral(y0, y1, i[1]);
      }
      double xp = 1.0;
      for (int e = 0; e < i[0]; ++e) xp *= x;
      return xp * inner;
    };
    std::vector<double> bp = slice_breakpoints_2d(T);
    bp.push_back(bc->center[0] - bc->radius);
    bp.push_back(bc->center[0]);
    bp.push_back(bc->center[0] + bc->radius);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::remove_if(bp.begin(), bp.end(),
                            [&](double x) {
                              return x < bc->center[0] - bc->radius ||
                                     x > bc->center[0] + bc->radius;
                            }),
             bp.end());
    QuadResult r = integrate_with_breakpoints(integrand, bp, tol * 0.25);
    converged = converged && r.converged;
    return bc->scale * r.value;
  }

  const auto& et = std::get<ExpTailComponent>(comp);
  if (T.dim() == 1) {
    double s = 0.0;
    for (const auto& [lo, hi] : intervals_1d(T)) s += power_exp_integral(lo, hi, i[0]);
    return et.scale * s;
  }
  // 2D: inner adaptive in y (split at 0), outer adaptive in x.
  auto integrand = [&](double x) {
    double inner = 0.0;
    for (const auto& [lo, hi] : slice_intervals_2d(T, x)) {
      auto f = [&](double y) {
        double yp = 1.0;
        for (int e = 0; e < i[1]; ++e) yp *= y;
        return yp * std::exp(-std::sqrt(x * x + y * y));
      };
      std::vector<double> bp{lo, hi};
      if (lo < 0 && hi > 0) bp = {lo, 0.0, hi};
      inner += integrate_with_breakpoints(f, bp, tol * 0.02).value;
    }
    double xp = 1.0;
    for (int e = 0; e < i[0]; ++e) xp *= x;
    return xp * inner;
  };
  std::vector<double> bp = slice_breakpoints_2d(T);
  bp.push_back(0.0);
  std::sort(bp.begin(), bp.end());
  Box bb = T.bounding_box();
  bp.erase(std::remove_if(bp.begin(), bp.end(),
                          [&](double x) { return x < bb.lo[0] || x > bb.hi[0]; }),
           bp.end());
  QuadResult r = integrate_with_breakpoints(integrand, bp, tol * 0.25);
  converged = converged && r.converged;
  return et.scale * r.value;
}

double component_moment_qmc(const DensityComponent& comp, const SupportRegion& T,
                            const MultiIndex& i, double tol, std::uint64_t seed,
                            bool& converged) {
  Box dom = T.bounding_box();
  double scale = 0.0;
  const BallComponent* bc = std::get_if<BallComponent>(&comp);
  const ExpTailComponent* et = std::get_if<ExpTailComponent>(&comp);
  if (bc) {
    for (int k = 0; k < T.dim(); ++k) {
      dom.lo[k] = std::max(dom.lo[k], bc->center[k] - bc->radius);
      dom.hi[k] = std::min(dom.hi[k], bc->center[k] + bc->radius);
      if (!(dom.hi[k] > dom.lo[k])) return 0.0;
    }
    scale = bc->scale;
  } else {
    scale = et->scale;
  }
  double dom_vol = dom.volume();
  if (!(dom_vol > 0)) return 0.0;
  Halton seq(T.dim(), seed);
  double sum = 0.0;
  std::uint64_t total = 0;
  double prev = 0.0;
  bool have_prev = false;
  for (std::uint64_t batch = 16384; total < (1u << 22); batch *= 2) {
    for (std::uint64_t k = 0; k < batch; ++k) {
      Point u01 = seq.next(), t(T.dim());
      for (int a = 0; a < T.dim(); ++a)
        t[a] = dom.lo[a] + u01[a] * (dom.hi[a] - dom.lo[a]);
      if (!T.contains(t)) continue;
      if (bc) {
        if (dist(t, bc->center) < bc->radius) sum += pow_mi(t, i);
      } else {
        sum += pow_mi(t, i) * std::exp(-norm(t));
      }
    }
    total += batch;
    double est = scale * dom_vol * sum / static_cast<double>(total);
    if (have_prev && std::abs(est - prev) <= 0.5 * tol) return est;
    prev = est;
    have_prev = true;
  }
  converged = false;
  return prev;
}

}  // namespace detail

MomentVector density_moments(const Density& d, const IndexSet& I, double tol,
                             std::uint64_t seed) {
  if (I.dim() != d.dim())
    throw InvalidInput("density_moments: index set dimension mismatch");
  if (!(tol > 0)) tol = default_quad_tol(d.dim());
  const SupportRegion& T = d.support();
  bool exact_2d = region_has_exact_2d_slices(T);
  std::vector<double> vals(I.size(), 0.0);
  bool converged = true;
  for (const auto& comp : d.components()) {
    if (auto* cc = std::get_if<CellsComponent>(&comp)) {
      std::vector<double> cv;
      std::vector<Box> cells = clip_cells_to_region(cc->cells, cc->values, T, cv);
      for (std::size_t k = 0; k < I.size(); ++k)
        for (std::size_t j = 0; j < cells.size(); ++j)
          vals[k] += cv[j] * detail::cell_monomial_integral(cells[j], I[k]);
      continue;
    }
    for (std::size_t k = 0; k < I.size(); ++k) {
      if (d.dim() == 1) {
        if (auto* bc = std::get_if<BallComponent>(&comp))
          vals[k] += detail::ball_moment_1d_closed(*bc, T, I[k]);
        else
          vals[k] += detail::component_moment_adaptive(comp, T, I[k], tol, converged);
      } else if (exact_2d) {
        vals[k] += detail::component_moment_adaptive(comp, T, I[k], tol, converged);
      } else {
        vals[k] += detail::component_moment_qmc(comp, T, I[k], tol, seed, converged);
      }
    }
  }
  if (!converged)
    throw ToleranceNotReached("density_moments: requested tolerance " +
                                  std::to_string(tol) + " not certified",
                              vals);
  return MomentVector(I, std::move(vals));
}

CellsComponent grid_function(const Box& box, const std::vector<int>& res,
                             const std::vector<double>& row_major_values) {
  int n = box.dim();
  if (static_cast<int>(res.size()) != n)
    throw InvalidInput("grid function: resolution dimension mismatch");
  std::size_t count = 1;
  for (int r : res) {
    if (r < 1) throw InvalidInput("grid function: resolution entries must be >= 1");
    count *= static_cast<std::size_t>(r);
  }
  if (row_major_values.size() != count)
    throw InvalidInput("grid function: expected " + std::to_string(count) + " values, got " +
                       std::to_string(row_major_values.size()));
  for (double v : row_major_values)
    if (v < 0) throw InvalidInput("grid function values must be nonnegative");
  CellsComponent out;
  std::vector<int> idx(n, 0);
  for (std::size_t flat = 0; flat < count; ++flat) {
    Box cell;
    cell.lo.resize(n);
    cell.hi.resize(n);
    for (int k = 0; k < n; ++k) {
      double w = (box.hi[k] - box.lo[k]) / res[k];
      cell.lo[k] = box.lo[k] + w * idx[k];
      cell.hi[k] = box.lo[k] + w * (idx[k] + 1);
    }
    out.cells.push_back(std::move(cell));
    out.values.push_back(row_major_values[flat]);
    int k = n - 1;  // last axis fastest
    while (k >= 0 && ++idx[k] == res[k]) idx[k--] = 0;
  }
  return out;
}

}  // namespace mcone
