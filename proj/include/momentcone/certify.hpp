#pragma once

#include <vector>

#include "momentcone/polynomial.hpp"
#include "momentcone/region.hpp"

namespace mcone {

struct MinPolyResult {
  Point point;
  double value = 0.0;
};

// Coarse grid scan over T followed by coordinate-wise pattern search with
// step trisection (30 rounds).  Heuristic: the reported value is an upper
// bound on the true minimum.  Ties go to the lowest grid / candidate index.
MinPolyResult min_poly_on_region(const Polynomial& p, const SupportRegion& T,
                                 int resolution);

enum class Verdict { StrictlyPositive, Degenerate, NegativeWitness };

const char* to_string(Verdict v);

struct CertifyParams {
  double eta = 1e-7;      // nonnegativity tolerance for the oracle
  double tol_pos = 1e-6;  // verdict band around zero
  int resolution = 0;     // 0: 512 per axis in 1D, 128 otherwise
  int max_cuts = 200;
  int init_grid = 0;      // initial sample-grid resolution; 0: 33 (1D) / 9
};

struct PositivityCertificate {
  Verdict verdict = Verdict::Degenerate;
  double margin = 0.0;       // min of riesz over {p >= 0 on T, l1 norm 1}
  Polynomial witness;        // attaining polynomial, l1-normalized
  double riesz_value = 0.0;  // = margin (recomputed from the witness)
  double min_on_T = 0.0;     // oracle minimum of the witness over T
  int cuts_used = 0;
  int resolution_used = 0;
  bool converged = false;    // false when the cut budget ran out
  std::vector<Point> constraint_points;  // final sample set S
  std::vector<double> lp_values;         // per-iteration optimum, nondecreasing
};

// Decides whether the Riesz functional of g is strictly positive on the cone
// of polynomials (supported on g's index set) that are nonnegative on T,
// normalized to unit l1 coefficient norm.  Cutting planes over a growing
// sample set S; each relaxation minimizes riesz over the l1 sphere exactly by
// splitting into sign orthants (the sphere restricted to an orthant is a
// simplex, so each piece is a small LP solved in dual form).  The relaxed
// optimum is a lower bound on the true margin at any S; the witness minimum
// over T certifies tightness.
PositivityCertificate certify(const MomentVector& g, const SupportRegion& T,
                              const CertifyParams& params = {});

// Independent slow oracle: enumerates a deterministic mesh of the l1 sphere
// (magnitude compositions x sign patterns), keeps candidates nonnegative on T
// per min_poly_on_region, then polishes the best by pairwise mass transfers.
// Exponential in the index-set size (limit 5).
double brute_force_margin(const MomentVector& g, const SupportRegion& T,
                          int sphere_samples, int resolution);

}  // namespace mcone
