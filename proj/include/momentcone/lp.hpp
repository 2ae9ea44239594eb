#pragma once

#include <limits>
#include <vector>

#include "momentcone/errors.hpp"

namespace mcone {

constexpr double kInf = std::numeric_limits<double>::infinity();

// General-form linear program: minimize c.x subject to
//   eq_rows . x == eq_rhs,  ge_rows . x >= ge_rhs,  lower <= x <= upper.
// Bounds default to free variables.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<std::vector<double>> eq_rows;
  std::vector<double> eq_rhs;
  std::vector<std::vector<double>> ge_rows;
  std::vector<double> ge_rhs;
  std::vector<double> lower, upper;

  explicit LinearProgram(int n)
      : num_vars(n), objective(n, 0.0), lower(n, -kInf), upper(n, kInf) {}

  void add_eq(std::vector<double> row, double rhs);
  void add_ge(std::vector<double> row, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  std::vector<double> x;
  double objective = 0.0;
  // Multipliers in the original row orientation; ge_duals are >= 0.
  std::vector<double> eq_duals, ge_duals;
  double max_violation = 0.0;  // re-checked against the original rows
  double duality_gap = 0.0;
  int iterations = 0;
};

// Dense two-phase revised simplex.  Deterministic: Dantzig pricing with
// lowest-index tie-breaks, switching to Bland's rule when stalling, so equal
// inputs produce identical pivot sequences.
LpSolution solve(const LinearProgram& lp, double feas_tol = 1e-9);

// min ||x||_inf subject to A x = b.  A must have full row rank (checked by
// pivoted elimination; throws RankDeficient).
std::vector<double> min_sup_norm_solve(const std::vector<std::vector<double>>& A,
                                       const std::vector<double>& b,
                                       double feas_tol = 1e-9);

}  // namespace mcone
