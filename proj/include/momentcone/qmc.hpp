#pragma once

#include <cstdint>
#include <vector>

#include "momentcone/multiindex.hpp"

namespace mcone {

// Halton sequence in [0,1)^dim with a seed-derived Cranley-Patterson shift.
// Fully deterministic: the k-th point depends only on (dim, seed, k).
class Halton {
public:
  Halton(int dim, std::uint64_t seed);
  Point next();
  void skip(std::uint64_t n);

private:
  int dim_;
  std::uint64_t index_ = 0;
  std::vector<int> bases_;
  std::vector<double> shift_;
};

// splitmix64: cheap deterministic stream used to derive shifts and to drive
// sampling where full RNG machinery is unnecessary.
std::uint64_t splitmix64(std::uint64_t& state);

// Uniform double in [0, 1) from a splitmix64 state.
double uniform01(std::uint64_t& state);

}  // namespace mcone
