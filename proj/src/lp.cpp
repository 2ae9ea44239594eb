#include "momentcone/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

namespace mcone {

void LinearProgram::add_eq(std::vector<double> row, double rhs) {
  if (static_cast<int>(row.size()) != num_vars)
    throw InvalidInput("LP equality row has wrong length");
  eq_rows.push_back(std::move(row));
  eq_rhs.push_back(rhs);
}

void LinearProgram::add_ge(std::vector<double> row, double rhs) {
  if (static_cast<int>(row.size()) != num_vars)
    throw InvalidInput("LP inequality row has wrong length");
  ge_rows.push_back(std::move(row));
  ge_rhs.push_back(rhs);
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Standard-form model: min c.z, A z = b, z >= 0 (artificials appended).
struct Standard {
  MatrixXd A;       // m x (n + m), artificial identity at the end
  VectorXd b;       // >= 0 after row flips
  VectorXd c;       // real costs (artificials: 0)
  int m = 0, n = 0; // n excludes artificials
  double obj_const = 0.0;

  std::vector<int> row_sign;  // original orientation of each row (+-1)
  // var mapping back to the original space
  struct VarMap {
    int kind;  // 0: x = shift + z[p];  1: x = shift - z[p];  2: x = z[p] - z[q]
    int p = -1, q = -1;
    double shift = 0.0;
  };
  std::vector<VarMap> vars;
  int num_eq = 0, num_ge = 0;  // original row counts (rows appear in this order)
};

Standard build_standard(const LinearProgram& lp) {
  Standard s;
  const int nv = lp.num_vars;
  // variable mapping
  int col = 0;
  s.vars.resize(nv);
  std::vector<int> ub_rows;  // vars needing an explicit upper-bound row
  for (int j = 0; j < nv; ++j) {
    double lb = lp.lower[j], ub = lp.upper[j];
    if (lb > ub) throw InvalidInput("LP variable has lower > upper");
    auto& vm = s.vars[j];
    if (std::isfinite(lb)) {
      vm.kind = 0;
      vm.p = col++;
      vm.shift = lb;
      if (std::isfinite(ub)) ub_rows.push_back(j);
    } else if (std::isfinite(ub)) {
      vm.kind = 1;
      vm.p = col++;
      vm.shift = ub;
    } else {
      vm.kind = 2;
      vm.p = col++;
      vm.q = col++;
    }
  }
  const int E = static_cast<int>(lp.eq_rows.size());
  const int G = static_cast<int>(lp.ge_rows.size());
  const int U = static_cast<int>(ub_rows.size());
  s.num_eq = E;
  s.num_ge = G;
  s.m = E + G + U;
  s.n = col + G + U;  // mapped vars + surplus + ub slacks
  s.A = MatrixXd::Zero(s.m, s.n + s.m);
  s.b = VectorXd::Zero(s.m);
  s.c = VectorXd::Zero(s.n + s.m);
  s.row_sign.assign(s.m, 1);

  auto emit_row = [&](int r, const std::vector<double>& row, double rhs) {
    double b = rhs;
    for (int j = 0; j < nv; ++j) {
      double a = row[j];
      if (a == 0.0) continue;
      const auto& vm = s.vars[j];
      if (vm.kind == 0) {
        s.A(r, vm.p) += a;
        b -= a * vm.shift;
      } else if (vm.kind == 1) {
        s.A(r, vm.p) -= a;
        b -= a * vm.shift;
      } else {
        s.A(r, vm.p) += a;
        s.A(r, vm.q) -= a;
      }
    }
    s.b(r) = b;
  };

  int r = 0;
  for (int i = 0; i < E; ++i, ++r) emit_row(r, lp.eq_rows[i], lp.eq_rhs[i]);
  for (int i = 0; i < G; ++i, ++r) {
    emit_row(r, lp.ge_rows[i], lp.ge_rhs[i]);
    s.A(r, col + i) = -1.0;  // surplus
  }
  for (int i = 0; i < U; ++i, ++r) {
    int j = ub_rows[i];
    s.A(r, s.vars[j].p) = 1.0;
    s.A(r, col + G + i) = 1.0;  // slack
    s.b(r) = lp.upper[j] - lp.lower[j];
  }

  // objective
  for (int j = 0; j < nv; ++j) {
    double cj = lp.objective[j];
    if (cj == 0.0) continue;
    const auto& vm = s.vars[j];
    if (vm.kind == 0) {
      s.c(vm.p) += cj;
      s.obj_const += cj * vm.shift;
    } else if (vm.kind == 1) {
      s.c(vm.p) -= cj;
      s.obj_const += cj * vm.shift;
    } else {
      s.c(vm.p) += cj;
      s.c(vm.q) -= cj;
    }
  }

  // flip rows to make b >= 0, then append the artificial identity
  for (int i = 0; i < s.m; ++i) {
    if (s.b(i) < 0) {
      s.A.row(i) *= -1.0;
      s.b(i) = -s.b(i);
      s.row_sign[i] = -1;
    }
    s.A(i, s.n + i) = 1.0;
  }
  return s;
}

struct SimplexState {
  std::vector<int> basis;      // var index per row
  MatrixXd B_inv;
  VectorXd x_B;
  int iterations = 0;
  bool bland = false;
};

void refactor(const Standard& s, SimplexState& st) {
  const int m = s.m;
  MatrixXd B(m, m);
  for (int r = 0; r < m; ++r) B.col(r) = s.A.col(st.basis[r]);
  Eigen::PartialPivLU<MatrixXd> lu(B);
  st.B_inv = lu.inverse();
  st.x_B = st.B_inv * s.b;
  for (int r = 0; r < m; ++r)
    if (st.x_B(r) < 0 && st.x_B(r) > -1e-11) st.x_B(r) = 0.0;
}

// Runs simplex iterations for the given cost vector.  Returns true when an
// optimal basis was reached, false when unbounded.
bool run_phase(const Standard& s, SimplexState& st, const VectorXd& cost,
               int max_entering_col, double feas_tol) {
  const int m = s.m;
  const double tol_d = 1e-9 * (1.0 + cost.cwiseAbs().maxCoeff());
  const double tol_piv = 1e-11;
  int stall = 0;
  double best_obj = kInf;
  const int iter_cap = 50000 + 200 * m;
  (void)feas_tol;

  while (true) {
    if (st.iterations > iter_cap)
      throw NumericalBreakdown("simplex: iteration cap exceeded (m=" +
                               std::to_string(m) + ")");
    VectorXd c_B(m);
    for (int r = 0; r < m; ++r) c_B(r) = cost(st.basis[r]);
    VectorXd pi = st.B_inv.transpose() * c_B;

    // pricing
    int enter = -1;
    double best_d = -tol_d;
    std::vector<char> in_basis(s.A.cols(), 0);
    for (int r = 0; r < m; ++r) in_basis[st.basis[r]] = 1;
    for (int j = 0; j < max_entering_col; ++j) {
      if (in_basis[j]) continue;
      double d = cost(j) - pi.dot(s.A.col(j));
      if (st.bland) {
        if (d < -tol_d) {
          enter = j;
          break;
        }
      } else if (d < best_d - 1e-12) {
        best_d = d;
        enter = j;
      }
    }
    if (enter < 0) return true;

    VectorXd w = st.B_inv * s.A.col(enter);
    int leave = -1;
    double theta = kInf;
    for (int r = 0; r < m; ++r) {
      if (w(r) > tol_piv) {
        double ratio = std::max(st.x_B(r), 0.0) / w(r);
        bool better = ratio < theta * (1.0 - 1e-12) - 1e-300;
        bool tie = !better && ratio <= theta * (1.0 + 1e-12) + 1e-300;
        if (leave >= 0 && tie) {
          // ties: prefer kicking artificials out, then lowest variable index
          bool cand_art = st.basis[r] >= s.n, cur_art = st.basis[leave] >= s.n;
          if (cand_art != cur_art)
            better = cand_art;
          else
            better = st.basis[r] < st.basis[leave];
        }
        if (leave < 0 || better) {
          leave = r;
          theta = ratio;
        }
      }
    }
    if (leave < 0) return false;  // unbounded direction

    // pivot
    st.x_B -= theta * w;
    st.x_B(leave) = theta;
    for (int r = 0; r < m; ++r)
      if (r != leave && st.x_B(r) < 0 && st.x_B(r) > -1e-11) st.x_B(r) = 0.0;
    double piv = w(leave);
    VectorXd row = st.B_inv.row(leave);
    for (int r = 0; r < m; ++r) {
      if (r == leave) continue;
      double f = w(r) / piv;
      if (f != 0.0) st.B_inv.row(r) -= f * row.transpose();
    }
    st.B_inv.row(leave) = row.transpose() / piv;
    st.basis[leave] = enter;
    ++st.iterations;
    if (st.iterations % 100 == 0) refactor(s, st);

    VectorXd c_B2(m);
    for (int r = 0; r < m; ++r) c_B2(r) = cost(st.basis[r]);
    double obj = c_B2.dot(st.x_B);
    if (obj < best_obj - 1e-13 * (1.0 + std::abs(best_obj))) {
      best_obj = obj;
      stall = 0;
    } else if (++stall > 500) {
      st.bland = true;
    }
  }
}

}  // namespace

LpSolution solve(const LinearProgram& lp, double feas_tol) {
  if (static_cast<int>(lp.objective.size()) != lp.num_vars ||
      static_cast<int>(lp.lower.size()) != lp.num_vars ||
      static_cast<int>(lp.upper.size()) != lp.num_vars)
    throw InvalidInput("LP vectors disagree with num_vars");
  Standard s = build_standard(lp);
  const int m = s.m, n = s.n;

  LpSolution out;
  SimplexState st;

  VectorXd z = VectorXd::Zero(n + m);
  if (m > 0) {
    st.basis.resize(m);
    for (int r = 0; r < m; ++r) st.basis[r] = n + r;
    st.B_inv = MatrixXd::Identity(m, m);
    st.x_B = s.b;

    VectorXd phase1 = VectorXd::Zero(n + m);
    for (int r = 0; r < m; ++r) phase1(n + r) = 1.0;
    if (!run_phase(s, st, phase1, n, feas_tol))
      throw NumericalBreakdown("simplex: phase 1 reported unbounded");
    double art_sum = 0.0;
    for (int r = 0; r < m; ++r)
      if (st.basis[r] >= n) art_sum += std::max(st.x_B(r), 0.0);
    if (art_sum > feas_tol * (1.0 + s.b.lpNorm<1>())) {
      out.status = LpStatus::Infeasible;
      out.iterations = st.iterations;
      return out;
    }
    // Drive residual artificials out where a real pivot exists.
    for (int r = 0; r < m; ++r) {
      if (st.basis[r] < n) continue;
      for (int j = 0; j < n; ++j) {
        double wr = st.B_inv.row(r).dot(s.A.col(j));
        if (std::abs(wr) > 1e-7) {
          bool basic = false;
          for (int q = 0; q < m; ++q) basic = basic || st.basis[q] == j;
          if (basic) continue;
          VectorXd w = st.B_inv * s.A.col(j);
          VectorXd row = st.B_inv.row(r);
          for (int q = 0; q < m; ++q) {
            if (q == r) continue;
            double f = w(q) / w(r);
            if (f != 0.0) st.B_inv.row(q) -= f * row.transpose();
          }
          st.B_inv.row(r) = row.transpose() / w(r);
          st.basis[r] = j;
          st.x_B(r) = 0.0;
          break;
        }
      }
    }

    if (!run_phase(s, st, s.c, n, feas_tol)) {
      out.status = LpStatus::Unbounded;
      out.iterations = st.iterations;
      return out;
    }
    refactor(s, st);
    for (int r = 0; r < m; ++r) z(st.basis[r]) = std::max(st.x_B(r), 0.0);
  } else {
    // No rows at all: optimal iff no profitable direction exists.
    for (int j = 0; j < n; ++j)
      if (s.c(j) < -1e-12) {
        out.status = LpStatus::Unbounded;
        return out;
      }
  }

  // duals (m > 0): solve B^T pi = c_B on the final basis
  VectorXd pi = VectorXd::Zero(m);
  if (m > 0) {
    MatrixXd B(m, m);
    VectorXd c_B(m);
    for (int r = 0; r < m; ++r) {
      B.col(r) = s.A.col(st.basis[r]);
      c_B(r) = s.c(st.basis[r]);
    }
    pi = B.transpose().partialPivLu().solve(c_B);
  }

  // map back
  out.x.assign(lp.num_vars, 0.0);
  for (int j = 0; j < lp.num_vars; ++j) {
    const auto& vm = s.vars[j];
    if (vm.kind == 0)
      out.x[j] = vm.shift + z(vm.p);
    else if (vm.kind == 1)
      out.x[j] = vm.shift - z(vm.p);
    else
      out.x[j] = z(vm.p) - z(vm.q);
  }
  out.objective = 0.0;
  for (int j = 0; j < lp.num_vars; ++j) out.objective += lp.objective[j] * out.x[j];
  out.eq_duals.resize(s.num_eq);
  out.ge_duals.resize(s.num_ge);
  for (int i = 0; i < s.num_eq; ++i) out.eq_duals[i] = s.row_sign[i] * pi(i);
  for (int i = 0; i < s.num_ge; ++i)
    out.ge_duals[i] = s.row_sign[s.num_eq + i] * pi(s.num_eq + i);
  out.duality_gap = std::abs(s.c.head(n + m).dot(z) - s.b.dot(pi));
  out.iterations = st.iterations;

  // re-verify against the original rows
  double viol = 0.0;
  for (std::size_t i = 0; i < lp.eq_rows.size(); ++i) {
    double v = -lp.eq_rhs[i];
    for (int j = 0; j < lp.num_vars; ++j) v += lp.eq_rows[i][j] * out.x[j];
    viol = std::max(viol, std::abs(v));
  }
  for (std::size_t i = 0; i < lp.ge_rows.size(); ++i) {
    double v = -lp.ge_rhs[i];
    for (int j = 0; j < lp.num_vars; ++j) v += lp.ge_rows[i][j] * out.x[j];
    viol = std::max(viol, std::max(0.0, -v));
  }
  for (int j = 0; j < lp.num_vars; ++j) {
    if (std::isfinite(lp.lower[j])) viol = std::max(viol, lp.lower[j] - out.x[j]);
    if (std::isfinite(lp.upper[j])) viol = std::max(viol, out.x[j] - lp.upper[j]);
  }
  out.max_violation = viol;
  double scale = (s.b.size() > 0) ? s.b.cwiseAbs().maxCoeff() : 0.0;
  if (viol > 1e-6 * (1.0 + scale))
    throw NumericalBreakdown("simplex: solution violates constraints by " +
                             std::to_string(viol));
  return out;
}

std::vector<double> min_sup_norm_solve(const std::vector<std::vector<double>>& A,
                                       const std::vector<double>& b,
                                       double feas_tol) {
  const int N = static_cast<int>(A.size());
  if (N == 0) throw InvalidInput("min_sup_norm_solve: empty system");
  const int M = static_cast<int>(A[0].size());
  for (const auto& row : A)
    if (static_cast<int>(row.size()) != M)
      throw InvalidInput("min_sup_norm_solve: ragged matrix");
  if (static_cast<int>(b.size()) != N)
    throw InvalidInput("min_sup_norm_solve: rhs length mismatch");

  MatrixXd Am(N, M);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < M; ++j) Am(i, j) = A[i][j];
  Eigen::ColPivHouseholderQR<MatrixXd> qr(Am.transpose());
  qr.setThreshold(1e-10);
  if (qr.rank() < N)
    throw RankDeficient("min_sup_norm_solve: matrix has row rank " +
                        std::to_string(qr.rank()) + " < " + std::to_string(N));

  // row equilibration (pure rescaling; the solution set is unchanged)
  std::vector<double> rs(N, 1.0);
  for (int i = 0; i < N; ++i) {
    double m = Am.row(i).cwiseAbs().maxCoeff();
    rs[i] = (m > 0) ? 1.0 / m : 1.0;
  }

  LinearProgram lp(M + 1);  // x_0..x_{M-1} free, x_M = bound >= 0
  lp.lower[M] = 0.0;
  lp.objective[M] = 1.0;
  for (int i = 0; i < N; ++i) {
    std::vector<double> row(M + 1, 0.0);
    for (int j = 0; j < M; ++j) row[j] = Am(i, j) * rs[i];
    lp.add_eq(std::move(row), b[i] * rs[i]);
  }
  for (int j = 0; j < M; ++j) {
    std::vector<double> r1(M + 1, 0.0), r2(M + 1, 0.0);
    r1[M] = 1.0;
    r1[j] = -1.0;  // m - x_j >= 0
    r2[M] = 1.0;
    r2[j] = 1.0;  // m + x_j >= 0
    lp.add_ge(std::move(r1), 0.0);
    lp.add_ge(std::move(r2), 0.0);
  }
  LpSolution sol = solve(lp, feas_tol);
  if (sol.status != LpStatus::Optimal)
    throw NumericalBreakdown("min_sup_norm_solve: solver returned non-optimal status");
  std::vector<double> x(sol.x.begin(), sol.x.begin() + M);
  double resid = 0.0, bn = 0.0;
  for (int i = 0; i < N; ++i) {
    double v = -b[i];
    for (int j = 0; j < M; ++j) v += A[i][j] * x[j];
    resid = std::max(resid, std::abs(v) * rs[i]);
    bn = std::max(bn, std::abs(b[i] * rs[i]));
  }
  if (resid > 100 * feas_tol * (1.0 + bn))
    throw NumericalBreakdown("min_sup_norm_solve: residual " + std::to_string(resid));
  return x;
}

}  // namespace mcone
