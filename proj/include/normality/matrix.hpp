#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace normality {

// Dense integer matrix, row-major. Zero-row and zero-column shapes are valid
// values (T_0 and T_{n-1} are of that kind).
class IntMatrix {
 public:
  using value_type = std::int64_t;

  IntMatrix() = default;

  IntMatrix(std::size_t rows, std::size_t cols, value_type fill = 0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  IntMatrix(std::size_t rows, std::size_t cols, std::vector<value_type> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw InputError("IntMatrix: entry count does not match shape");
    }
  }

  static IntMatrix from_rows(std::initializer_list<std::initializer_list<value_type>> rows) {
    std::vector<std::vector<value_type>> tmp;
    for (const auto& r : rows) tmp.emplace_back(r);
    return from_rows(tmp);
  }

  static IntMatrix from_rows(const std::vector<std::vector<value_type>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    std::vector<value_type> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
      if (row.size() != c) throw InputError("IntMatrix: ragged rows");
      data.insert(data.end(), row.begin(), row.end());
    }
    return IntMatrix(r, c, std::move(data));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  value_type& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  value_type operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const value_type> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<value_type> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  const std::vector<value_type>& data() const noexcept { return data_; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](value_type v) { return v == 0; });
  }

  value_type max_abs() const {
    value_type m = 0;
    for (auto v : data_) m = std::max(m, v < 0 ? -v : v);
    return m;
  }

  IntMatrix transposed() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  // Rows listed in `keep`, in that order.
  IntMatrix select_rows(std::span<const std::size_t> keep) const {
    IntMatrix out(keep.size(), cols_);
    for (std::size_t i = 0; i < keep.size(); ++i) {
      std::copy_n(data_.begin() + keep[i] * cols_, cols_, out.data_.begin() + i * cols_);
    }
    return out;
  }

  IntMatrix without_rows(std::span<const std::size_t> drop) const {
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (std::find(drop.begin(), drop.end(), r) == drop.end()) keep.push_back(r);
    }
    return select_rows(keep);
  }

  IntMatrix first_rows(std::size_t count) const {
    std::vector<std::size_t> keep(std::min(count, rows_));
    std::iota(keep.begin(), keep.end(), std::size_t{0});
    return select_rows(keep);
  }

  // [this ; other]
  IntMatrix stacked(const IntMatrix& other) const {
    if (cols_ != other.cols_ && rows_ != 0 && other.rows_ != 0) {
      throw InputError("IntMatrix::stacked: column mismatch");
    }
    const std::size_t c = rows_ != 0 ? cols_ : other.cols_;
    IntMatrix out(rows_ + other.rows_, c);
    std::copy(data_.begin(), data_.end(), out.data_.begin());
    std::copy(other.data_.begin(), other.data_.end(), out.data_.begin() + data_.size());
    return out;
  }

  // [this | column]
  IntMatrix with_column(std::span<const value_type> column) const {
    if (column.size() != rows_) throw InputError("IntMatrix::with_column: length mismatch");
    IntMatrix out(rows_, cols_ + 1);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::copy_n(data_.begin() + r * cols_, cols_, out.data_.begin() + r * (cols_ + 1));
      out(r, cols_) = column[r];
    }
    return out;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

// Square matrix with entries in {+1, -1}.
class SignMatrix {
 public:
  SignMatrix() = default;

  SignMatrix(std::size_t n, std::vector<std::int8_t> entries) : n_(n), data_(std::move(entries)) {
    if (n_ == 0) throw InputError("SignMatrix: dimension must be at least 1");
    if (data_.size() != n_ * n_) throw InputError("SignMatrix: entry count is not n*n");
    for (auto v : data_) {
      if (v != 1 && v != -1) throw InputError("SignMatrix: entries must be +1 or -1");
    }
  }

  static SignMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    const std::size_t n = rows.size();
    std::vector<std::int8_t> data;
    for (const auto& r : rows) {
      if (r.size() != n) throw InputError("SignMatrix: not square");
      for (int v : r) data.push_back(static_cast<std::int8_t>(v));
    }
    return SignMatrix(n, std::move(data));
  }

  // Bit b of `bits` (row-major position b) set means entry -1.
  static SignMatrix from_bits(std::size_t n, std::uint64_t bits) {
    std::vector<std::int8_t> data(n * n);
    for (std::size_t b = 0; b < n * n; ++b) data[b] = ((bits >> b) & 1U) ? -1 : 1;
    return SignMatrix(n, std::move(data));
  }

  static SignMatrix all_ones(std::size_t n) {
    return SignMatrix(n, std::vector<std::int8_t>(n * n, 1));
  }

  std::size_t n() const noexcept { return n_; }
  int operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }
  const std::vector<std::int8_t>& entries() const noexcept { return data_; }

  IntMatrix to_int() const {
    return IntMatrix(n_, n_, std::vector<IntMatrix::value_type>(data_.begin(), data_.end()));
  }

  SignMatrix transposed() const {
    std::vector<std::int8_t> t(n_ * n_);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) t[c * n_ + r] = data_[r * n_ + c];
    return SignMatrix(n_, std::move(t));
  }

  bool is_symmetric() const {
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = r + 1; c < n_; ++c)
        if (data_[r * n_ + c] != data_[c * n_ + r]) return false;
    return true;
  }

  // Swap rows r, s and columns r, s (0-based).
  SignMatrix conjugated_by_transposition(std::size_t r, std::size_t s) const {
    SignMatrix out = *this;
    if (r == s) return out;
    for (std::size_t c = 0; c < n_; ++c) std::swap(out.data_[r * n_ + c], out.data_[s * n_ + c]);
    for (std::size_t c = 0; c < n_; ++c) std::swap(out.data_[c * n_ + r], out.data_[c * n_ + s]);
    return out;
  }

  friend bool operator==(const SignMatrix&, const SignMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::int8_t> data_;
};

// Bijection of {1..n}; stored 0-based, exposed 1-based through one_based().
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> img(n);
    std::iota(img.begin(), img.end(), std::size_t{0});
    return Permutation(std::move(img));
  }

  static Permutation from_zero_based(std::vector<std::size_t> images) {
    return Permutation(std::move(images));
  }

  static Permutation from_one_based(std::span<const int> images) {
    std::vector<std::size_t> img;
    img.reserve(images.size());
    for (int v : images) {
      if (v < 1 || static_cast<std::size_t>(v) > images.size()) {
        throw InputError("Permutation: image out of range 1..n");
      }
      img.push_back(static_cast<std::size_t>(v - 1));
    }
    return Permutation(std::move(img));
  }

  // The transposition (i j), 1-based.
  static Permutation transposition(std::size_t n, std::size_t i, std::size_t j) {
    if (i < 1 || j < 1 || i > n || j > n) throw InputError("transposition: index out of range");
    auto p = identity(n);
    std::swap(p.images_[i - 1], p.images_[j - 1]);
    return p;
  }

  std::size_t n() const noexcept { return images_.size(); }
  std::size_t operator()(std::size_t k) const { return images_[k]; }
  const std::vector<std::size_t>& zero_based() const noexcept { return images_; }

  std::vector<int> one_based() const {
    std::vector<int> out;
    out.reserve(images_.size());
    for (auto v : images_) out.push_back(static_cast<int>(v + 1));
    return out;
  }

  Permutation inverse() const {
    std::vector<std::size_t> inv(images_.size());
    for (std::size_t k = 0; k < images_.size(); ++k) inv[images_[k]] = k;
    return Permutation(std::move(inv));
  }

  bool is_identity() const {
    for (std::size_t k = 0; k < images_.size(); ++k)
      if (images_[k] != k) return false;
    return true;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  explicit Permutation(std::vector<std::size_t> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (auto v : images_) {
      if (v >= images_.size() || seen[v]) throw InputError("Permutation: not a bijection");
      seen[v] = true;
    }
  }

  std::vector<std::size_t> images_;
};

// (outer ∘ inner)(k) = outer(inner(k)).
inline Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.n() != inner.n()) throw InputError("compose: size mismatch");
  std::vector<std::size_t> img(inner.n());
  for (std::size_t k = 0; k < inner.n(); ++k) img[k] = outer(inner(k));
  return Permutation::from_zero_based(std::move(img));
}

}  // namespace normality
