#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "momentcone/region.hpp"

namespace mcone {

struct Atom {
  Point location;
  double weight = 0.0;  // > 0
};

struct AtomicMeasure {
  int dim = 0;
  std::vector<Atom> atoms;

  AtomicMeasure() = default;
  AtomicMeasure(int d, std::vector<Atom> a);

  double mass() const;
  // Hard error when an atom lies outside T.
  void validate_in(const SupportRegion& T) const;
};

// s * indicator(|t - center| < radius), restricted to the support.
struct BallComponent {
  Point center;
  double radius = 0.0;
  double scale = 0.0;  // >= 0
};

// s * e^{-|t|}, restricted to the support.
struct ExpTailComponent {
  double scale = 0.0;  // >= 0
};

// Piecewise constant over pairwise-disjoint boxes that lie inside the
// support.  Values may be negative: perturbation corrections use this form,
// and the density stays nonnegative only as a whole.
struct CellsComponent {
  std::vector<Box> cells;
  std::vector<double> values;
};

using DensityComponent = std::variant<BallComponent, ExpTailComponent, CellsComponent>;

// An L^1 density on T written as a sum of simple components.
class Density {
public:
  Density(SupportRegion support, std::vector<DensityComponent> components);

  const SupportRegion& support() const { return support_; }
  const std::vector<DensityComponent>& components() const { return components_; }
  int dim() const { return support_.dim(); }

  double value(const Point& t) const;  // 0 outside the support

  // Upper bound for sup_T density (sums component maxima).
  double sup_bound() const;

  // Lower bound for min over a cell assumed to lie inside the support;
  // exact for cells aligned with the component geometry.
  double min_on_box(const Box& cell) const;

private:
  SupportRegion support_;
  std::vector<DensityComponent> components_;
};

MomentVector atomic_moments(const AtomicMeasure& nu, const IndexSet& I);

// int |t^j| d nu = sum_k w_k |t_k^j|.
double abs_moment(const AtomicMeasure& nu, const MultiIndex& j);

// Moments of the density over its support.  Closed forms where the geometry
// allows (1D; piecewise-constant cells), reduced adaptive quadrature in 2D,
// deterministic sampling otherwise.  Throws ToleranceNotReached (with the
// best estimates attached) when `tol` cannot be certified.
MomentVector density_moments(const Density& d, const IndexSet& I, double tol,
                             std::uint64_t seed = 0);

// Tensor-cell piecewise-constant function on a box: res[k] cells per axis,
// values in row-major order (last axis fastest), all >= 0.
CellsComponent grid_function(const Box& box, const std::vector<int>& res,
                             const std::vector<double>& row_major_values);

double default_quad_tol(int dim);  // 1e-8 in 1D, 1e-5 otherwise

namespace detail {

// Single-component moment, exposed so tests can cross-check routes.
double ball_moment_1d_closed(const BallComponent& c, const SupportRegion& T,
                             const MultiIndex& i);
double component_moment_adaptive(const DensityComponent& c, const SupportRegion& T,
                                 const MultiIndex& i, double tol, bool& converged);
double component_moment_qmc(const DensityComponent& c, const SupportRegion& T,
                            const MultiIndex& i, double tol, std::uint64_t seed,
                            bool& converged);

double cell_monomial_integral(const Box& cell, const MultiIndex& i);

}  // namespace detail

}  // namespace mcone
