#pragma once

#include <cstdint>

#include "momentcone/quadrature.hpp"

namespace mcone {

// Smears each atom of nu into a normalized ball indicator of radius eps
// clipped to T: component scale w_k / vol(B(y_k, eps) cap T).  Moments are
// preserved up to error_bound.  With ensure_positive an eps * e^{-|t|} tail
// is added, making the density strictly positive on all of T.
Density mollify(const AtomicMeasure& nu, const SupportRegion& T, double eps,
                bool ensure_positive);

// Normalized local moment of one smeared atom at y:
//   (1 / vol(B(y,eps) cap T)) * int_{B(y,eps) cap T} t^i dt.
// Equals y^i up to the error the bound below controls; identically 1 at i=0.
double psi(double eps, const MultiIndex& i, const Point& y,
           const SupportRegion& T, double tol = -1.0, std::uint64_t seed = 0);

// Certified bound on |i-th moment of mollify(nu,...,false)  -  i-th moment
// of nu|:  eps * sum_{0 <= j <= i} prod_k C(i_k, j_k) * abs_moment(nu, j),
// and exactly 0 for i = 0 (mass is preserved by construction).
double error_bound(const AtomicMeasure& nu, double eps, const MultiIndex& i);

}  // namespace mcone
