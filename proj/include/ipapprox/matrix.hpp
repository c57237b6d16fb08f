#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "ipapprox/rational.hpp"

namespace ipapprox {

/// Dense row-major rational matrix.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rat> entries);
  RatMatrix(std::initializer_list<std::initializer_list<Rat>> rows);

  static RatMatrix from_rows(const std::vector<RatVector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rat& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Rat& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<const Rat> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }
  RatVector column(std::size_t c) const;
  const std::vector<Rat>& entries() const { return entries_; }

  RatMatrix transpose() const;
  /// Columns in the given order.
  RatMatrix select_columns(std::span<const std::size_t> cols) const;
  RatVector multiply(const RatVector& x) const;
  RatVector multiply(const IntVector& x) const;

  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rat> entries_;
};

/// Largest absolute entry; zero for an empty matrix.
Rat inf_norm(const RatMatrix& m);

/// Exact rank over Q. Rows are cleared to integers and reduced with
/// fraction-free (Bareiss) elimination.
std::size_t rank_exact(const RatMatrix& m);

/// True iff the columns are linearly independent.
bool is_nonsingular(const RatMatrix& m);

}  // namespace ipapprox
