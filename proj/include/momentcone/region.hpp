#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "momentcone/polynomial.hpp"

namespace mcone {

struct Box {
  Point lo, hi;

  double volume() const;
  bool contains(const Point& t) const;
  Point center() const;
  int dim() const { return static_cast<int>(lo.size()); }
};

struct BallShape {
  Point center;
  double radius = 0.0;
};

// Members must have pairwise disjoint interiors so that volumes and moments
// add up without inclusion-exclusion.
struct UnionShape {
  std::vector<Box> boxes;
};

// {t in box : q_k(t) >= 0 for all k}.
struct SemialgebraicShape {
  Box box;
  std::vector<Polynomial> constraints;
};

// Compact support region T.  Construction validates shape consistency but
// deliberately allows measure-zero regions (e.g. a zero-width box) so that
// regularity probing can report on them; problem loading separately rejects
// regions that fail positive_measure_check().
class SupportRegion {
public:
  using Shape = std::variant<Box, BallShape, UnionShape, SemialgebraicShape>;

  SupportRegion(int dim, Shape shape, double measure_floor = -1.0);

  int dim() const { return dim_; }
  const Shape& shape() const { return shape_; }
  double measure_floor() const { return measure_floor_; }

  bool contains(const Point& t) const;
  Box bounding_box() const;

  // Heuristic check that T has positive Lebesgue measure.
  bool positive_measure_check(std::uint64_t seed = 0) const;

private:
  int dim_ = 0;
  Shape shape_;
  double measure_floor_ = 0.0;
};

struct SampleGrid {
  std::vector<Point> points;   // tensor grid over the bounding box, filtered by T
  double cell_volume = 0.0;    // bounding box volume / (total tensor points)
  int resolution = 0;          // points per axis
};

// vol(B(y, eps) cap T).  Closed-form / reduced quadrature for box, union and
// ball shapes in dimensions 1-2; deterministic low-discrepancy sampling
// (relative error target 1e-3) for semialgebraic shapes and n >= 3.
// Throws RegularityViolation when the result does not exceed measure_floor.
double local_volume(const SupportRegion& T, const Point& y, double eps,
                    std::uint64_t seed = 0);

// Tensor grid with `resolution` points per axis; throws EmptyGrid when no
// point lands in T.
SampleGrid sample_grid(const SupportRegion& T, int resolution);

struct ProbeSample {
  Point at;
  double eps = 0.0;
  double volume = 0.0;
};

struct ProbeReport {
  int num_samples = 0;
  std::vector<double> epsilons;
  std::vector<ProbeSample> minima;      // per epsilon: smallest local volume seen
  std::vector<ProbeSample> violations;  // local volume at or below the floor
  std::string note;
};

// Samples local volumes at interior and boundary-biased points.  Evidence
// only: a clean report does not prove regularity.
ProbeReport regularity_probe(const SupportRegion& T, int num_samples,
                             std::vector<double> epsilons, std::uint64_t seed = 0);

namespace detail {

using Interval = std::pair<double, double>;

// T as a sorted list of disjoint intervals (1D shapes only).  Semialgebraic
// boundaries are located by scan + bisection.
std::vector<Interval> intervals_1d(const SupportRegion& T);

// Cross-section {t2 : (x, t2) in T} for 2D box/union/ball shapes.
std::vector<Interval> slice_intervals_2d(const SupportRegion& T, double x);

// x-values at which the 2D slice topology can change.
std::vector<double> slice_breakpoints_2d(const SupportRegion& T);

// Non-throwing local_volume used by the probe.
double local_volume_value(const SupportRegion& T, const Point& y, double eps,
                          std::uint64_t seed);

double intersect_length(const std::vector<Interval>& xs, double a, double b);

}  // namespace detail

}  // namespace mcone
