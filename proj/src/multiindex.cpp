#include "momentcone/multiindex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mcone {

namespace {

std::string to_string(const MultiIndex& i) {
  std::string s = "(";
  for (std::size_t k = 0; k < i.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(i[k]);
  }
  return s + ")";
}

}  // namespace

int degree(const MultiIndex& i) { return std::accumulate(i.begin(), i.end(), 0); }

double pow_mi(const Point& t, const MultiIndex& i) {
  double r = 1.0;
  for (std::size_t k = 0; k < i.size(); ++k)
    for (int e = 0; e < i[k]; ++e) r *= t[k];
  return r;
}

double abs_pow_mi(const Point& t, const MultiIndex& i) {
  return std::abs(pow_mi(t, i));
}

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
  int da = degree(a), db = degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<MultiIndex> sigma(const MultiIndex& i) {
  std::vector<int> nz;
  for (std::size_t k = 0; k < i.size(); ++k)
    if (i[k] != 0) nz.push_back(static_cast<int>(k));
  std::vector<MultiIndex> out;
  out.reserve(std::size_t{1} << nz.size());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nz.size()); ++mask) {
    MultiIndex j(i.size(), 0);
    for (std::size_t b = 0; b < nz.size(); ++b)
      if (mask & (std::uint64_t{1} << b)) j[nz[b]] = i[nz[b]];
    out.push_back(std::move(j));
  }
  std::sort(out.begin(), out.end(), graded_lex_less);
  return out;
}

double binomial_product(const MultiIndex& i, const MultiIndex& j) {
  double prod = 1.0;
  for (std::size_t k = 0; k < i.size(); ++k) {
    if (j[k] < 0 || j[k] > i[k]) return 0.0;
    // binomial(i_k, j_k) by the multiplicative formula; exact for small args.
    double c = 1.0;
    for (int r = 1; r <= j[k]; ++r) c = c * (i[k] - j[k] + r) / r;
    prod *= std::round(c);
  }
  return prod;
}

IndexSet::IndexSet(int dim, std::vector<MultiIndex> indices) : dim_(dim) {
  if (dim <= 0) throw InvalidInput("index set dimension must be positive");
  for (const auto& i : indices) {
    if (static_cast<int>(i.size()) != dim)
      throw InvalidInput("multi-index " + to_string(i) + " does not have dimension " +
                         std::to_string(dim));
    for (int e : i)
      if (e < 0) throw InvalidInput("multi-index " + to_string(i) + " has a negative entry");
  }
  std::sort(indices.begin(), indices.end(), graded_lex_less);
  auto dup = std::adjacent_find(indices.begin(), indices.end());
  if (dup != indices.end())
    throw InvalidInput("duplicate multi-index " + to_string(*dup));
  if (indices.empty() || degree(indices.front()) != 0)
    throw InvalidInput("index set must contain the zero multi-index");
  indices_ = std::move(indices);
}

std::size_t IndexSet::find(const MultiIndex& i) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), i, graded_lex_less);
  if (it != indices_.end() && *it == i)
    return static_cast<std::size_t>(it - indices_.begin());
  return npos;
}

int IndexSet::max_degree() const {
  return indices_.empty() ? 0 : degree(indices_.back());
}

bool is_regular_index_set(const IndexSet& I) {
  for (const auto& i : I.indices())
    for (const auto& j : sigma(i))
      if (!I.contains(j)) return false;
  return true;
}

void require_regular(const IndexSet& I) {
  for (const auto& i : I.indices())
    for (const auto& j : sigma(i))
      if (!I.contains(j))
        throw InvalidInput("index set is not regular: contains " + to_string(i) +
                           " but not " + to_string(j) +
                           "; rerun with --close-index-set or fix the input");
}

IndexSet close_index_set(int dim, const std::vector<MultiIndex>& indices) {
  std::vector<MultiIndex> all;
  for (const auto& i : indices) {
    auto s = sigma(i);
    all.insert(all.end(), s.begin(), s.end());
  }
  if (all.empty()) all.push_back(MultiIndex(dim, 0));
  std::sort(all.begin(), all.end(), graded_lex_less);
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return IndexSet(dim, std::move(all));
}

}  // namespace mcone
