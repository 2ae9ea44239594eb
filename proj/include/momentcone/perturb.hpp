#pragma once

#include <cstdint>
#include <vector>

#include "momentcone/quadrature.hpp"

namespace mcone {

// Discretized correction operator for a density f on T: a set of disjoint
// cells on which f >= delta, with the matrix of cell monomial moments.
// Corrections bounded by delta/4 per cell keep the perturbed density above
// delta/2 there and untouched (hence still positive) elsewhere.
struct PerturbationPlan {
  IndexSet index_set;
  std::vector<Box> t_star;     // cells with exact min of f >= delta
  double delta = 0.0;
  int k = 0;                   // 0: perturb picks the truncation level itself
  std::vector<std::vector<double>> cell_moment_matrix;  // |I| x |t_star|
  double radius_estimate = 0.0;  // beta with |beta|_2 below this must succeed
};

// Chooses delta of the form sup(f)/2^m and a family of disjoint cells where
// f >= delta holds cell-exactly, large enough (>= cells members) for the
// moment matrix to reach full row rank.  Candidate families: a tensor
// partition of the bounding box, and tilings of boxes inscribed in the ball
// components of f; the family with the larger resulting radius estimate
// wins.  The radius estimate (delta/4) / (sqrt(N) * max_i |A^+ e_i|_inf)
// guarantees the delta/4 correction cap for any |beta|_2 below it.
PerturbationPlan plan_perturbation(const Density& f, const SupportRegion& T,
                                   const IndexSet& I, int cells);

struct PerturbResult {
  Density density;
  double delta = 0.0;
  int k = 0;
  double u_inf = 0.0;  // truncation-correction sup norm (< delta/4)
  double v_inf = 0.0;  // beta-correction sup norm (< delta/4)
  std::vector<double> moments_before;  // of f, on plan.index_set
  std::vector<double> moments_after;   // of the result
  double max_moment_error = 0.0;       // |after - (before + beta)|_inf
};

// Shifts the moments of f by exactly beta while keeping the density bounded
// and strictly positive: g = f_k - u + v with f_k = min(f, k) + (1/k)e^{-|t|}
// (k doubling from max(delta, 2 sup f), so the clip never binds), u the
// min-sup-norm cell correction cancelling the added tail's moments, v the
// min-sup-norm cell correction realizing beta.  Both corrections live on the
// plan's cells and must stay below delta/4 in sup norm; v failing that is
// BetaTooLarge (checked a posteriori -- the plan's radius_estimate is only a
// sufficient bound), u failing it for every k up to 2^20 is KExhausted.
PerturbResult perturb(const Density& f, const PerturbationPlan& plan,
                      const std::vector<double>& beta, double tol = -1.0,
                      std::uint64_t seed = 0);

}  // namespace mcone
