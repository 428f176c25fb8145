#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace xorbench {

/// Dense bit matrix over GF(2), rows packed 64 columns per word.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), words_((cols + 63) / 64),
        data_(rows * words_, 0) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t words_per_row() const noexcept { return words_; }

  bool get(std::size_t r, std::size_t c) const noexcept {
    return (data_[r * words_ + c / 64] >> (c % 64)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool v) noexcept {
    auto& w = data_[r * words_ + c / 64];
    const std::uint64_t mask = std::uint64_t{1} << (c % 64);
    w = v ? (w | mask) : (w & ~mask);
  }
  void flip(std::size_t r, std::size_t c) noexcept {
    data_[r * words_ + c / 64] ^= std::uint64_t{1} << (c % 64);
  }

  std::span<std::uint64_t> row(std::size_t r) noexcept {
    return {data_.data() + r * words_, words_};
  }
  std::span<const std::uint64_t> row(std::size_t r) const noexcept {
    return {data_.data() + r * words_, words_};
  }

  std::size_t row_weight(std::size_t r) const noexcept {
    std::size_t w = 0;
    for (auto word : row(r)) w += static_cast<std::size_t>(std::popcount(word));
    return w;
  }
  std::size_t col_weight(std::size_t c) const noexcept {
    std::size_t w = 0;
    for (std::size_t r = 0; r < rows_; ++r) w += get(r, c) ? 1 : 0;
    return w;
  }

  /// A·x over GF(2); x holds one bit per byte.
  std::vector<std::uint8_t> multiply(std::span<const std::uint8_t> x) const {
    if (x.size() != cols_) throw std::invalid_argument("BitMatrix::multiply: dimension mismatch");
    std::vector<std::uint8_t> out(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      unsigned acc = 0;
      for (std::size_t c = 0; c < cols_; ++c) acc ^= get(r, c) & (x[c] & 1U);
      out[r] = static_cast<std::uint8_t>(acc);
    }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> data_;
};

struct Gf2Solution {
  std::size_t rank = 0;
  // Present iff the system is square and full rank.
  std::optional<std::vector<std::uint8_t>> solution;

  bool singular() const noexcept { return !solution.has_value(); }
};

/// Gauss-Jordan elimination of the augmented system [A | b] over GF(2).
/// Pivot is the first row (at or below the current one) with the column bit
/// set. Throws std::invalid_argument if A is not square or b has the wrong
/// length.
inline Gf2Solution gf2_eliminate(const BitMatrix& a, std::span<const std::uint8_t> b) {
  const std::size_t m = a.rows();
  if (a.cols() != m) throw std::invalid_argument("gf2_eliminate: matrix is not square");
  if (b.size() != m) throw std::invalid_argument("gf2_eliminate: rhs length mismatch");

  // Augment with the rhs as column m.
  BitMatrix aug(m, m + 1);
  for (std::size_t r = 0; r < m; ++r) {
    auto src = a.row(r);
    auto dst = aug.row(r);
    for (std::size_t w = 0; w < src.size(); ++w) dst[w] = src[w];
    aug.set(r, m, b[r] & 1U);
  }

  const std::size_t words = aug.words_per_row();
  std::vector<std::size_t> pivot_row_of_col(m, m);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m && rank < m; ++col) {
    std::size_t pivot = rank;
    while (pivot < m && !aug.get(pivot, col)) ++pivot;
    if (pivot == m) continue;
    if (pivot != rank) {
      auto p = aug.row(pivot);
      auto q = aug.row(rank);
      for (std::size_t w = 0; w < words; ++w) std::swap(p[w], q[w]);
    }
    auto prow = aug.row(rank);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == rank || !aug.get(r, col)) continue;
      auto target = aug.row(r);
      for (std::size_t w = col / 64; w < words; ++w) target[w] ^= prow[w];
    }
    pivot_row_of_col[col] = rank;
    ++rank;
  }

  Gf2Solution result;
  result.rank = rank;
  if (rank == m) {
    std::vector<std::uint8_t> x(m);
    for (std::size_t col = 0; col < m; ++col) {
      x[col] = aug.get(pivot_row_of_col[col], m) ? 1 : 0;
    }
    result.solution = std::move(x);
  }
  return result;
}

}  // namespace xorbench
