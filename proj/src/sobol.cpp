#include "menuabc/sobol.hpp"

#include <bit>
#include <stdexcept>

namespace menuabc {

namespace {

constexpr int kBits = 32;

struct DirectionSpec {
  unsigned degree;
  unsigned poly;  // encoded coefficients a_1..a_{s-1}
  std::uint32_t m[5];
};

// Joe-Kuo "new-joe-kuo-6" initial direction numbers for dimensions 2..8; the
// first dimension is the van der Corput sequence in base 2.
constexpr DirectionSpec kSpecs[] = {
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
};

std::vector<std::uint32_t> build_directions(std::size_t dim_index) {
  std::vector<std::uint32_t> v(kBits);
  if (dim_index == 0) {
    for (int k = 0; k < kBits; ++k) {
      v[k] = 1u << (31 - k);
    }
    return v;
  }
  const DirectionSpec& spec = kSpecs[dim_index - 1];
  const unsigned s = spec.degree;
  for (unsigned k = 0; k < s; ++k) {
    v[k] = spec.m[k] << (31 - k);
  }
  for (int k = static_cast<int>(s); k < kBits; ++k) {
    v[k] = v[k - s] ^ (v[k - s] >> s);
    for (unsigned i = 1; i < s; ++i) {
      if ((spec.poly >> (s - 1 - i)) & 1u) {
        v[k] ^= v[k - i];
      }
    }
  }
  return v;
}

}  // namespace

SobolSequence::SobolSequence(std::size_t dims) : dims_(dims) {
  if (dims < 1 || dims > kMaxDims) {
    throw std::invalid_argument("sobol: dims must be in [1,8]");
  }
  state_.assign(dims, 0);
  directions_.reserve(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    directions_.push_back(build_directions(d));
  }
}

std::vector<double> SobolSequence::next() {
  index_ += 1;
  const int bit = std::countr_zero(index_);
  std::vector<double> point(dims_);
  for (std::size_t d = 0; d < dims_; ++d) {
    state_[d] ^= directions_[d][bit];
    point[d] = static_cast<double>(state_[d]) / 4294967296.0;
  }
  return point;
}

std::vector<std::vector<double>> sobol_init(std::size_t n, std::size_t dims) {
  SobolSequence seq(dims);
  std::vector<std::vector<double>> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    points.push_back(seq.next());
  }
  return points;
}

}  // namespace menuabc
