#pragma once

#include <cstdint>
#include <vector>

#include "momentcone/errors.hpp"

namespace mcone {

// A multi-index i = (i_1, ..., i_n) with nonnegative entries.
using MultiIndex = std::vector<int>;
using Point = std::vector<double>;

int degree(const MultiIndex& i);

// t^i = prod_k t_k^{i_k}, with 0^0 = 1.
double pow_mi(const Point& t, const MultiIndex& i);

// |t^i| = prod_k |t_k|^{i_k}.
double abs_pow_mi(const Point& t, const MultiIndex& i);

// Total order: by total degree, then lexicographically entry by entry.
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

// sigma(i): all j obtained by zeroing out an arbitrary subset of the nonzero
// entries of i, i.e. j_k in {0, i_k} for every k.  |sigma(i)| = 2^{#nonzero}.
std::vector<MultiIndex> sigma(const MultiIndex& i);

// prod_k binomial(i_k, j_k); zero unless 0 <= j <= i entrywise.
double binomial_product(const MultiIndex& i, const MultiIndex& j);

// Finite set of multi-indices, canonically sorted (graded lexicographic),
// duplicate-free, always containing the zero index.
class IndexSet {
public:
  IndexSet() = default;
  // Validates dimensions and entries, sorts, rejects duplicates, requires 0.
  IndexSet(int dim, std::vector<MultiIndex> indices);

  int dim() const { return dim_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const MultiIndex& operator[](std::size_t k) const { return indices_[k]; }

  // Position of i in the sorted list, or npos.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t find(const MultiIndex& i) const;
  bool contains(const MultiIndex& i) const { return find(i) != npos; }

  int max_degree() const;

  bool operator==(const IndexSet& o) const {
    return dim_ == o.dim_ && indices_ == o.indices_;
  }

private:
  int dim_ = 0;
  std::vector<MultiIndex> indices_;
};

// A set is regular when it contains sigma(i) for each of its elements.
bool is_regular_index_set(const IndexSet& I);

// Throws InvalidInput naming an offending index when I is not regular.
void require_regular(const IndexSet& I);

// Smallest regular superset: closure under sigma.  Accepts raw lists that
// may lack the zero index (the closure always contains it).
IndexSet close_index_set(int dim, const std::vector<MultiIndex>& indices);

}  // namespace mcone
