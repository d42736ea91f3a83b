#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace menuabc {

// Gray-code Sobol sequence with the standard Joe-Kuo direction numbers.
// Generation starts at sequence index 1, so the all-zeros origin never
// appears.
class SobolSequence {
 public:
  static constexpr std::size_t kMaxDims = 8;

  explicit SobolSequence(std::size_t dims);

  std::vector<double> next();

 private:
  std::size_t dims_;
  std::uint64_t index_ = 0;
  std::vector<std::uint32_t> state_;
  std::vector<std::vector<std::uint32_t>> directions_;  // [dim][bit]
};

// First n points of the sequence (origin skipped).
std::vector<std::vector<double>> sobol_init(std::size_t n, std::size_t dims);

}  // namespace menuabc
