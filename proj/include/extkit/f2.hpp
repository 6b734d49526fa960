#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace extkit {

// Precondition violation that a caller could have avoided; the CLI maps it
// to exit code 2.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace f2 {

// Fixed-length bit vector over the two-element field, packed in 64-bit words.
class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }

  void set(std::size_t i, bool v) {
    std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }

  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  Vec& operator^=(const Vec& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }

  bool zero() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }

  // Index of the lowest set bit, or -1.
  long lowest() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return static_cast<long>(k * 64 + __builtin_ctzll(w_[k]));
    return -1;
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  friend bool operator==(const Vec& a, const Vec& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// Row-major matrix over F2.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), r_(rows, Vec(cols)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const { return r_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool v) { r_[r].set(c, v); }

  Vec& row(std::size_t r) { return r_[r]; }
  const Vec& row(std::size_t r) const { return r_[r]; }

  // Column as a vector; rows are the fast axis so this is O(rows).
  Vec col(std::size_t c) const {
    Vec v(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      if (r_[r].get(c)) v.set(r, true);
    return v;
  }

  Vec apply(const Vec& x) const {
    if (x.size() != cols_)
      throw usage_error("apply: vector length does not match column count");
    Vec out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      Vec t = r_[r];
      t ^= x;
      // parity of <row, x>: popcount(row & x)
      std::size_t dot = (r_[r].popcount() + x.popcount() - t.popcount()) / 2;
      if (dot & 1) out.set(r, true);
    }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.r_ == b.r_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Vec> r_;
};

inline Matrix mul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw usage_error("mul: inner dimensions disagree");
  Matrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (a.get(r, k)) out.row(r) ^= b.row(k);
  return out;
}

namespace detail {

// In-place reduced row echelon form with leftmost pivots.
// Returns the pivot columns in row order.
inline std::vector<std::size_t> rref(Matrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && !a.get(p, c)) ++p;
    if (p == a.rows()) continue;
    std::swap(a.row(r), a.row(p));
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (i != r && a.get(i, c)) a.row(i) ^= a.row(r);
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

inline std::size_t rank(Matrix a) { return detail::rref(a).size(); }

// Basis of the null space {x : A x = 0}, one vector per free column,
// ordered by ascending free column index.
inline std::vector<Vec> kernel_basis(Matrix a) {
  auto pivots = detail::rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vec> out;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec v(a.cols());
    v.set(f, true);
    for (std::size_t r = 0; r < pivots.size(); ++r)
      if (a.get(r, f)) v.set(pivots[r], true);
    out.push_back(v);
  }
  return out;
}

// Solves A x = b; free variables are set to zero.  Empty result means the
// system is inconsistent.  b must have one entry per row.
inline std::optional<Vec> solve(const Matrix& a, const Vec& b) {
  if (b.size() != a.rows())
    throw usage_error("solve: right-hand side length does not match row count");
  Matrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    aug.row(r) = Vec(a.cols() + 1);
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (a.get(r, c)) aug.set(r, c, true);
    if (b.get(r)) aug.set(r, a.cols(), true);
  }
  auto pivots = detail::rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  Vec x(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r)
    if (aug.get(r, a.cols())) x.set(pivots[r], true);
  return x;
}

// Incremental span with distinct lowest-bit pivots; vectors reduce in
// insertion order, which keeps results independent of any later inserts.
class Basis {
 public:
  Vec reduce(Vec v) const {
    for (const auto& b : v_) {
      long p = b.lowest();
      if (p >= 0 && v.get(static_cast<std::size_t>(p))) v ^= b;
    }
    return v;
  }

  // Returns true and stores the residual if it is nonzero.
  bool add(Vec v) {
    v = reduce(std::move(v));
    if (v.zero()) return false;
    v_.push_back(std::move(v));
    return true;
  }

  std::size_t size() const { return v_.size(); }
  const std::vector<Vec>& vectors() const { return v_; }

 private:
  std::vector<Vec> v_;
};

}  // namespace f2
}  // namespace extkit
