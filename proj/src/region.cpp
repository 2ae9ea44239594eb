#include "momentcone/region.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "momentcone/integrate.hpp"
#include "momentcone/qmc.hpp"

namespace mcone {

namespace {

std::string point_str(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < p.size(); ++k) os << (k ? "," : "") << p[k];
  os << ")";
  return os.str();
}

double norm2(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

bool boxes_overlap_interior(const Box& a, const Box& b) {
  for (std::size_t k = 0; k < a.lo.size(); ++k)
    if (std::min(a.hi[k], b.hi[k]) - std::max(a.lo[k], b.lo[k]) <= 1e-14) return false;
  return true;
}

Box intersect_boxes(const Box& a, const Box& b) {
  Box r;
  r.lo.resize(a.lo.size());
  r.hi.resize(a.lo.size());
  for (std::size_t k = 0; k < a.lo.size(); ++k) {
    r.lo[k] = std::max(a.lo[k], b.lo[k]);
    r.hi[k] = std::min(a.hi[k], b.hi[k]);
    if (r.hi[k] < r.lo[k]) r.hi[k] = r.lo[k] = 0.5 * (r.lo[k] + r.hi[k]);  // empty
  }
  return r;
}

bool box_nonempty(const Box& b) {
  for (std::size_t k = 0; k < b.lo.size(); ++k)
    if (!(b.hi[k] > b.lo[k])) return false;
  return true;
}

}  // namespace

double Box::volume() const {
  double v = 1.0;
  for (std::size_t k = 0; k < lo.size(); ++k) v *= (hi[k] - lo[k]);
  return v;
}

bool Box::contains(const Point& t) const {
  for (std::size_t k = 0; k < lo.size(); ++k)
    if (t[k] < lo[k] || t[k] > hi[k]) return false;
  return true;
}

Point Box::center() const {
  Point c(lo.size());
  for (std::size_t k = 0; k < lo.size(); ++k) c[k] = 0.5 * (lo[k] + hi[k]);
  return c;
}

SupportRegion::SupportRegion(int dim, Shape shape, double measure_floor)
    : dim_(dim), shape_(std::move(shape)) {
  if (dim <= 0) throw InvalidInput("support region dimension must be positive");
  auto check_box = [dim](const Box& b, const char* what) {
    if (static_cast<int>(b.lo.size()) != dim || static_cast<int>(b.hi.size()) != dim)
      throw InvalidInput(std::string(what) + ": box dimension mismatch");
    for (std::size_t k = 0; k < b.lo.size(); ++k)
      if (b.hi[k] < b.lo[k])
        throw InvalidInput(std::string(what) + ": box has hi < lo on axis " +
                           std::to_string(k));
  };
  if (auto* b = std::get_if<Box>(&shape_)) {
    check_box(*b, "box region");
  } else if (auto* s = std::get_if<BallShape>(&shape_)) {
    if (static_cast<int>(s->center.size()) != dim)
      throw InvalidInput("ball region: center dimension mismatch");
    if (!(s->radius > 0)) throw InvalidInput("ball region: radius must be positive");
  } else if (auto* u = std::get_if<UnionShape>(&shape_)) {
    if (u->boxes.empty()) throw InvalidInput("union region: needs at least one box");
    for (const auto& m : u->boxes) check_box(m, "union region");
    for (std::size_t a = 0; a < u->boxes.size(); ++a)
      for (std::size_t b2 = a + 1; b2 < u->boxes.size(); ++b2)
        if (boxes_overlap_interior(u->boxes[a], u->boxes[b2]))
          throw InvalidInput("union region: boxes " + std::to_string(a) + " and " +
                             std::to_string(b2) + " have overlapping interiors");
  } else if (auto* sa = std::get_if<SemialgebraicShape>(&shape_)) {
    check_box(sa->box, "semialgebraic region");
    for (const auto& q : sa->constraints)
      if (q.index_set.dim() != dim)
        throw InvalidInput("semialgebraic region: constraint dimension mismatch");
  }
  measure_floor_ = (measure_floor >= 0) ? measure_floor
                                        : 1e-12 * bounding_box().volume();
}

bool SupportRegion::contains(const Point& t) const {
  if (static_cast<int>(t.size()) != dim_) return false;
  if (auto* b = std::get_if<Box>(&shape_)) return b->contains(t);
  if (auto* s = std::get_if<BallShape>(&shape_))
    return norm2(t, s->center) <= s->radius;
  if (auto* u = std::get_if<UnionShape>(&shape_)) {
    for (const auto& m : u->boxes)
      if (m.contains(t)) return true;
    return false;
  }
  const auto& sa = std::get<SemialgebraicShape>(shape_);
  if (!sa.box.contains(t)) return false;
  for (const auto& q : sa.constraints)
    if (eval_poly(q, t) < 0) return false;
  return true;
}

Box SupportRegion::bounding_box() const {
  if (auto* b = std::get_if<Box>(&shape_)) return *b;
  if (auto* s = std::get_if<BallShape>(&shape_)) {
    Box r;
    r.lo.resize(dim_);
    r.hi.resize(dim_);
    for (int k = 0; k < dim_; ++k) {
      r.lo[k] = s->center[k] - s->radius;
      r.hi[k] = s->center[k] + s->radius;
    }
    return r;
  }
  if (auto* u = std::get_if<UnionShape>(&shape_)) {
    Box r = u->boxes.front();
    for (const auto& m : u->boxes)
      for (int k = 0; k < dim_; ++k) {
        r.lo[k] = std::min(r.lo[k], m.lo[k]);
        r.hi[k] = std::max(r.hi[k], m.hi[k]);
      }
    return r;
  }
  return std::get<SemialgebraicShape>(shape_).box;
}

bool SupportRegion::positive_measure_check(std::uint64_t seed) const {
  if (auto* u = std::get_if<UnionShape>(&shape_)) {
    for (const auto& m : u->boxes)
      if (m.volume() > 0) return true;
    return false;
  }
  if (!(bounding_box().volume() > 0)) return false;
  if (std::holds_alternative<Box>(shape_) || std::holds_alternative<BallShape>(shape_))
    return true;
  // Semialgebraic: look for a witness point; sampling evidence only.
  Halton seq(dim_, seed);
  Box bb = bounding_box();
  int hits = 0;
  for (int k = 0; k < 4096; ++k) {
    Point u01 = seq.next(), t(dim_);
    for (int a = 0; a < dim_; ++a) t[a] = bb.lo[a] + u01[a] * (bb.hi[a] - bb.lo[a]);
    if (contains(t)) ++hits;
  }
  return hits > 0;
}

namespace detail {

double intersect_length(const std::vector<Interval>& xs, double a, double b) {
  double len = 0.0;
  for (const auto& [lo, hi] : xs)
    len += std::max(0.0, std::min(hi, b) - std::max(lo, a));
  return len;
}

std::vector<Interval> intervals_1d(const SupportRegion& T) {
  if (T.dim() != 1) throw NumericalBreakdown("intervals_1d on non-1D region");
  if (auto* b = std::get_if<Box>(&T.shape())) return {{b->lo[0], b->hi[0]}};
  if (auto* s = std::get_if<BallShape>(&T.shape()))
    return {{s->center[0] - s->radius, s->center[0] + s->radius}};
  if (auto* u = std::get_if<UnionShape>(&T.shape())) {
    std::vector<Interval> xs;
    for (const auto& m : u->boxes) xs.push_back({m.lo[0], m.hi[0]});
    std::sort(xs.begin(), xs.end());
    return xs;
  }
  // Semialgebraic 1D: locate the feasible set by membership scan + bisection.
  const auto& sa = std::get<SemialgebraicShape>(T.shape());
  double a = sa.box.lo[0], b = sa.box.hi[0];
  if (!(b > a)) return T.contains({a}) ? std::vector<Interval>{{a, b}} : std::vector<Interval>{};
  const int n = 4096;
  auto inside = [&](double x) { return T.contains({x}); };
  auto refine = [&](double out, double in) {
    for (int it = 0; it < 80; ++it) {
      double m = 0.5 * (out + in);
      (inside(m) ? in : out) = m;
    }
    return in;
  };
  std::vector<Interval> xs;
  double start = 0.0;
  bool open = false;
  double prev = a;
  bool prev_in = inside(a);
  if (prev_in) { open = true; start = a; }
  for (int k = 1; k <= n; ++k) {
    double x = a + (b - a) * k / n;
    bool in = inside(x);
    if (in && !prev_in) { start = refine(prev, x); open = true; }
    if (!in && prev_in && open) { xs.push_back({start, refine(x, prev)}); open = false; }
    prev = x;
    prev_in = in;
  }
  if (open) xs.push_back({start, b});
  return xs;
}

std::vector<Interval> slice_intervals_2d(const SupportRegion& T, double x) {
  std::vector<Interval> xs;
  if (auto* b = std::get_if<Box>(&T.shape())) {
    if (x >= b->lo[0] && x <= b->hi[0]) xs.push_back({b->lo[1], b->hi[1]});
  } else if (auto* u = std::get_if<UnionShape>(&T.shape())) {
    for (const auto& m : u->boxes)
      if (x >= m.lo[0] && x <= m.hi[0]) xs.push_back({m.lo[1], m.hi[1]});
    std::sort(xs.begin(), xs.end());
  } else if (auto* s = std::get_if<BallShape>(&T.shape())) {
    double d = s->radius * s->radius - (x - s->center[0]) * (x - s->center[0]);
    if (d > 0) {
      double h = std::sqrt(d);
      xs.push_back({s->center[1] - h, s->center[1] + h});
    }
  } else {
    throw NumericalBreakdown("slice_intervals_2d: unsupported shape");
  }
  return xs;
}

std::vector<double> slice_breakpoints_2d(const SupportRegion& T) {
  std::vector<double> bp;
  if (auto* b = std::get_if<Box>(&T.shape())) {
    bp = {b->lo[0], b->hi[0]};
  } else if (auto* u = std::get_if<UnionShape>(&T.shape())) {
    for (const auto& m : u->boxes) {
      bp.push_back(m.lo[0]);
      bp.push_back(m.hi[0]);
    }
  } else if (auto* s = std::get_if<BallShape>(&T.shape())) {
    bp = {s->center[0] - s->radius, s->center[0], s->center[0] + s->radius};
  }
  std::sort(bp.begin(), bp.end());
  return bp;
}

namespace {

double local_volume_qmc(const SupportRegion& T, const Point& y, double eps,
                        std::uint64_t seed) {
  Box bb = T.bounding_box(), ball_bb;
  ball_bb.lo.resize(T.dim());
  ball_bb.hi.resize(T.dim());
  for (int k = 0; k < T.dim(); ++k) {
    ball_bb.lo[k] = y[k] - eps;
    ball_bb.hi[k] = y[k] + eps;
  }
  Box dom = intersect_boxes(bb, ball_bb);
  if (!box_nonempty(dom)) return 0.0;
  double dom_vol = dom.volume();
  Halton seq(T.dim(), seed);
  std::uint64_t total = 0, hits = 0;
  double prev_est = -1.0;
  // Fixed batch doubling; stops once two successive estimates agree to 1e-3
  // relative (the documented accuracy target for sampled volumes).
  for (std::uint64_t batch = 8192; total < (1u << 21); batch *= 2) {
    for (std::uint64_t k = 0; k < batch; ++k) {
      Point u01 = seq.next(), t(T.dim());
      for (int a = 0; a < T.dim(); ++a)
        t[a] = dom.lo[a] + u01[a] * (dom.hi[a] - dom.lo[a]);
      if (norm2(t, y) < eps && T.contains(t)) ++hits;
    }
    total += batch;
    double est = dom_vol * static_cast<double>(hits) / static_cast<double>(total);
    if (prev_est >= 0 && std::abs(est - prev_est) <= 1e-3 * std::max(est, 1e-300))
      return est;
    prev_est = est;
  }
  return prev_est < 0 ? 0.0 : prev_est;
}

}  // namespace

double local_volume_value(const SupportRegion& T, const Point& y, double eps,
                          std::uint64_t seed) {
  if (T.dim() == 1)  // all 1D shapes reduce to interval lists
    return intersect_length(intervals_1d(T), y[0] - eps, y[0] + eps);
  if (T.dim() == 2 && !std::holds_alternative<SemialgebraicShape>(T.shape())) {
    // Integrate the chord-overlap length across the ball's x-extent.
    auto integrand = [&](double x) {
      double d = eps * eps - (x - y[0]) * (x - y[0]);
      if (d <= 0) return 0.0;
      double h = std::sqrt(d);
      return intersect_length(slice_intervals_2d(T, x), y[1] - h, y[1] + h);
    };
    std::vector<double> bp = slice_breakpoints_2d(T);
    bp.push_back(y[0] - eps);
    bp.push_back(y[0]);
    bp.push_back(y[0] + eps);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::remove_if(bp.begin(), bp.end(),
                            [&](double x) { return x < y[0] - eps || x > y[0] + eps; }),
             bp.end());
    double tol = std::max(1e-14, 1e-8 * eps * eps);
    return integrate_with_breakpoints(integrand, bp, tol).value;
  }
  return local_volume_qmc(T, y, eps, seed);
}

}  // namespace detail

double local_volume(const SupportRegion& T, const Point& y, double eps,
                    std::uint64_t seed) {
  if (!(eps > 0)) throw InvalidInput("local_volume: eps must be positive");
  double v = detail::local_volume_value(T, y, eps, seed);
  if (v <= T.measure_floor())
    throw RegularityViolation("local volume " + std::to_string(v) + " at " +
                              point_str(y) + " with eps=" + std::to_string(eps) +
                              " is at or below the floor " +
                              std::to_string(T.measure_floor()));
  return v;
}

SampleGrid sample_grid(const SupportRegion& T, int resolution) {
  if (resolution < 1) throw InvalidInput("sample_grid: resolution must be >= 1");
  Box bb = T.bounding_box();
  int n = T.dim();
  std::vector<std::vector<double>> axes(n);
  for (int k = 0; k < n; ++k) {
    if (resolution == 1) {
      axes[k] = {0.5 * (bb.lo[k] + bb.hi[k])};
    } else {
      for (int j = 0; j < resolution; ++j)
        axes[k].push_back(bb.lo[k] + (bb.hi[k] - bb.lo[k]) * j / (resolution - 1));
    }
  }
  double total = std::pow(static_cast<double>(resolution), n);
  SampleGrid g;
  g.resolution = resolution;
  g.cell_volume = bb.volume() / total;
  std::vector<int> idx(n, 0);
  while (true) {
    Point t(n);
    for (int k = 0; k < n; ++k) t[k] = axes[k][idx[k]];
    if (T.contains(t)) g.points.push_back(std::move(t));
    int k = n - 1;
    while (k >= 0 && ++idx[k] == resolution) idx[k--] = 0;
    if (k < 0) break;
  }
  if (g.points.empty()) throw EmptyGrid("sample_grid: no grid point lies in the region");
  return g;
}

ProbeReport regularity_probe(const SupportRegion& T, int num_samples,
                             std::vector<double> epsilons, std::uint64_t seed) {
  if (num_samples < 1) throw InvalidInput("regularity_probe: num_samples must be >= 1");
  if (epsilons.empty()) throw InvalidInput("regularity_probe: needs at least one eps");
  for (double e : epsilons)
    if (!(e > 0)) throw InvalidInput("regularity_probe: eps values must be positive");

  Box bb = T.bounding_box();
  int n = T.dim();
  Point center = bb.center();
  std::uint64_t rng = seed ^ 0xabcdef1234567890ULL;

  std::vector<Point> samples;
  // Half the budget goes to boundary-biased points: a point on a bounding-box
  // face, walked toward the center until it lands in T.
  int boundary_budget = num_samples / 2;
  for (int s = 0; s < boundary_budget; ++s) {
    int face = s % (2 * n);
    int axis = face / 2;
    Point t(n);
    for (int k = 0; k < n; ++k) t[k] = bb.lo[k] + uniform01(rng) * (bb.hi[k] - bb.lo[k]);
    t[axis] = (face % 2 == 0) ? bb.lo[axis] : bb.hi[axis];
    bool ok = T.contains(t);
    for (int step = 1; !ok && step <= 64; ++step) {
      Point w(n);
      for (int k = 0; k < n; ++k)
        w[k] = t[k] + (center[k] - t[k]) * step / 64.0;
      if (T.contains(w)) {
        t = w;
        ok = true;
      }
    }
    if (ok) samples.push_back(std::move(t));
  }
  // The rest: uniform rejection samples inside T.
  while (static_cast<int>(samples.size()) < num_samples) {
    bool placed = false;
    for (int attempt = 0; attempt < 512; ++attempt) {
      Point t(n);
      for (int k = 0; k < n; ++k) t[k] = bb.lo[k] + uniform01(rng) * (bb.hi[k] - bb.lo[k]);
      if (T.contains(t)) {
        samples.push_back(std::move(t));
        placed = true;
        break;
      }
    }
    if (!placed) break;  // region too thin to hit; report what we have
  }

  ProbeReport rep;
  rep.num_samples = static_cast<int>(samples.size());
  rep.epsilons = epsilons;
  rep.note =
      "sampled evidence only: small minima suggest near-degenerate neighborhoods, "
      "but a clean probe does not prove regularity";
  for (double eps : epsilons) {
    ProbeSample best;
    best.eps = eps;
    best.volume = -1.0;
    for (const auto& y : samples) {
      double v = detail::local_volume_value(T, y, eps, seed);
      if (best.volume < 0 || v < best.volume) best = {y, eps, v};
      if (v <= T.measure_floor()) rep.violations.push_back({y, eps, v});
    }
    if (best.volume >= 0) rep.minima.push_back(best);
  }
  return rep;
}

}  // namespace mcone
