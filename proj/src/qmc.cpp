#include "momentcone/qmc.hpp"

#include <cmath>

namespace mcone {

namespace {
constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                           31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

double radical_inverse(std::uint64_t n, int base) {
  double inv = 1.0 / base, r = 0.0, f = inv;
  while (n > 0) {
    r += f * static_cast<double>(n % base);
    n /= base;
    f *= inv;
  }
  return r;
}
}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

Halton::Halton(int dim, std::uint64_t seed) : dim_(dim) {
  bases_.resize(dim_);
  shift_.resize(dim_);
  std::uint64_t s = seed ^ 0x51a2b3c4d5e6f708ULL;
  for (int k = 0; k < dim_; ++k) {
    bases_[k] = kPrimes[k % 20];
    shift_[k] = (seed == 0) ? 0.0 : uniform01(s);
  }
  index_ = 20;  // skip the first few strongly-correlated points
}

Point Halton::next() {
  Point p(dim_);
  for (int k = 0; k < dim_; ++k) {
    double v = radical_inverse(index_, bases_[k]) + shift_[k];
    p[k] = v - std::floor(v);
  }
  ++index_;
  return p;
}

void Halton::skip(std::uint64_t n) { index_ += n; }

}  // namespace mcone
