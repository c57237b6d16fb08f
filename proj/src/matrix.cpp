#include "ipapprox/matrix.hpp"

#include <stdexcept>
#include <utility>

namespace ipapprox {

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rat> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw std::invalid_argument("RatMatrix: entry count does not match shape");
  }
}

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rat>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("RatMatrix: ragged rows");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows, std::size_t cols) {
  RatMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("RatMatrix: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

RatVector RatMatrix::column(std::size_t c) const {
  RatVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RatMatrix RatMatrix::select_columns(std::span<const std::size_t> cols) const {
  RatMatrix out(rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols.size(); ++k) out(r, k) = (*this)(r, cols[k]);
  return out;
}

RatVector RatMatrix::multiply(const RatVector& x) const {
  if (x.size() != cols_) throw std::invalid_argument("multiply: dimension mismatch");
  RatVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Rat s = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      const Rat& a = (*this)(r, c);
      if (sgn(a) != 0 && sgn(x[c]) != 0) s += a * x[c];
    }
    out[r] = s;
  }
  return out;
}

RatVector RatMatrix::multiply(const IntVector& x) const { return multiply(to_rat(x)); }

Rat inf_norm(const RatMatrix& m) { return inf_norm(m.entries()); }

std::size_t rank_exact(const RatMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows == 0 || cols == 0) return 0;

  // Clear denominators row by row; scaling a row never changes the rank.
  std::vector<std::vector<Int>> a(rows, std::vector<Int>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    Int l = 1;
    for (std::size_t c = 0; c < cols; ++c) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    }
    for (std::size_t c = 0; c < cols; ++c) {
      a[r][c] = m(r, c).get_num() * (l / m(r, c).get_den());
    }
  }

  std::size_t rank = 0;
  Int prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rows;
    for (std::size_t r = rank; r < rows; ++r) {
      if (sgn(a[r][c]) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    const Int& p = a[rank][c];
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t k = c + 1; k < cols; ++k) {
        Int v = a[r][k] * p - a[r][c] * a[rank][k];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[r][k] = std::move(v);
      }
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

bool is_nonsingular(const RatMatrix& m) { return rank_exact(m) == m.cols(); }

}  // namespace ipapprox
