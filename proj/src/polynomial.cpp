#include "momentcone/polynomial.hpp"

#include <cmath>
#include <string>

namespace mcone {

Polynomial::Polynomial(IndexSet I, std::vector<double> c)
    : index_set(std::move(I)), coefficients(std::move(c)) {
  if (coefficients.size() != index_set.size())
    throw InvalidInput("polynomial has " + std::to_string(coefficients.size()) +
                       " coefficients for " + std::to_string(index_set.size()) +
                       " indices");
}

MomentVector::MomentVector(IndexSet I, std::vector<double> v)
    : index_set(std::move(I)), values(std::move(v)) {
  if (values.size() != index_set.size())
    throw InvalidInput("moment vector has " + std::to_string(values.size()) +
                       " values for " + std::to_string(index_set.size()) + " indices");
}

double eval_poly(const Polynomial& p, const Point& t) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.coefficients.size(); ++k)
    s += p.coefficients[k] * pow_mi(t, p.index_set[k]);
  return s;
}

double riesz_apply(const MomentVector& g, const Polynomial& p) {
  if (!(g.index_set == p.index_set))
    throw InvalidInput("riesz_apply: moment vector and polynomial use different index sets");
  double s = 0.0;
  for (std::size_t k = 0; k < g.values.size(); ++k)
    s += g.values[k] * p.coefficients[k];
  return s;
}

double poly_norm(const Polynomial& p) {
  double s = 0.0;
  for (double c : p.coefficients) s += std::abs(c);
  return s;
}

}  // namespace mcone
