#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace casimir::quad {

/// Sobol low-discrepancy sequence, 32-bit resolution, Joe-Kuo direction
/// numbers. Points are generated per index through the Gray-code form, so
/// any sample is computable directly from its index without predecessor
/// state; that is what makes work partitioning reproducible.
class SobolSequence {
 public:
  static constexpr int kMaxDim = 10;
  static constexpr int kBits = 32;

  explicit SobolSequence(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim)
      throw std::invalid_argument("SobolSequence: dimension out of range");
    // Dimension 0: van der Corput in base 2.
    for (int b = 0; b < kBits; ++b) dirs_[0][b] = 1u << (31 - b);
    for (int j = 1; j < dim; ++j) {
      const Row& row = kRows[j - 1];
      for (int b = 0; b < row.s; ++b)
        dirs_[j][b] = static_cast<std::uint32_t>(row.m[b]) << (31 - b);
      for (int b = row.s; b < kBits; ++b) {
        std::uint32_t v = dirs_[j][b - row.s];
        v ^= v >> row.s;
        for (int k = 1; k < row.s; ++k)
          if ((row.a >> (row.s - 1 - k)) & 1u) v ^= dirs_[j][b - k];
        dirs_[j][b] = v;
      }
    }
  }

  int dimension() const { return dim_; }

  /// Raw 32-bit integer coordinate of sample `index` in dimension `j`.
  std::uint32_t raw(std::uint64_t index, int j) const {
    std::uint64_t gray = index ^ (index >> 1);
    std::uint32_t v = 0;
    for (int b = 0; gray != 0; ++b, gray >>= 1)
      if (gray & 1u) v ^= dirs_[j][b];
    return v;
  }

  /// Digitally shifted point in (0,1)^dim: coordinates are XORed with
  /// per-dimension shift words, then centered by half an ulp so that exact
  /// 0 and 1 never occur.
  void point(std::uint64_t index, std::span<const std::uint32_t> shift,
             std::span<double> out) const {
    constexpr double scale = 1.0 / 4294967296.0;  // 2^-32
    for (int j = 0; j < dim_; ++j) {
      const std::uint32_t x = raw(index, j) ^ shift[j];
      out[j] = (static_cast<double>(x) + 0.5) * scale;
    }
  }

 private:
  struct Row {
    int s;             // polynomial degree
    std::uint32_t a;   // inner polynomial coefficients
    std::uint32_t m[8];
  };
  // First rows of the Joe-Kuo (new-joe-kuo-6) table for dimensions 2..10.
  static constexpr std::array<Row, kMaxDim - 1> kRows = {{
      {1, 0, {1}},
      {2, 1, {1, 3}},
      {3, 1, {1, 3, 1}},
      {3, 2, {1, 1, 1}},
      {4, 1, {1, 1, 3, 3}},
      {4, 4, {1, 3, 5, 13}},
      {5, 2, {1, 1, 5, 5, 17}},
      {5, 4, {1, 1, 5, 5, 5}},
      {5, 7, {1, 1, 7, 11, 19}},
  }};

  std::array<std::array<std::uint32_t, kBits>, kMaxDim> dirs_{};
  int dim_;
};

}  // namespace casimir::quad
