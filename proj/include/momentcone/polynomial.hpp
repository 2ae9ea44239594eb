#pragma once

#include <vector>

#include "momentcone/multiindex.hpp"

namespace mcone {

// A polynomial supported on a fixed index set: p = sum_i c_i X^i.
struct Polynomial {
  IndexSet index_set;
  std::vector<double> coefficients;

  Polynomial() = default;
  Polynomial(IndexSet I, std::vector<double> c);
};

// A truncated moment vector g = (g_i)_{i in I}.  When used as problem data
// the mass entry g_0 must equal 1 (checked at load, not here).
struct MomentVector {
  IndexSet index_set;
  std::vector<double> values;

  MomentVector() = default;
  MomentVector(IndexSet I, std::vector<double> v);
};

double eval_poly(const Polynomial& p, const Point& t);

// phi_g(p) = sum_i g_i c_i.  The index sets must agree.
double riesz_apply(const MomentVector& g, const Polynomial& p);

// l1 norm of the coefficient vector; the normalization used throughout.
double poly_norm(const Polynomial& p);

}  // namespace mcone
