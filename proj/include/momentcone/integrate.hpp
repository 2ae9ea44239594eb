#pragma once

#include <functional>
#include <vector>

namespace mcone {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimate
  bool converged = true;
};

// Adaptive Simpson on [a, b] with absolute tolerance tol.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, double tol, int max_depth = 48);

// Same, but splits the domain at the given sorted breakpoints first, so the
// integrand only needs to be smooth between consecutive breakpoints.
QuadResult integrate_with_breakpoints(const std::function<double(double)>& f,
                                      const std::vector<double>& breakpoints,
                                      double tol, int max_depth = 48);

// int_a^b t^i e^{-t} dt for 0 <= a <= b, by the closed-form antiderivative
// -e^{-t} * sum_{r=0}^{i} i!/(i-r)! * t^{i-r}.
double monomial_exp_integral(int i, double a, double b);

}  // namespace mcone
