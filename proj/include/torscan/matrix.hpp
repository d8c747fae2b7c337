#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

#include "torscan/errors.hpp"

namespace torscan {

// Dense integer matrix; the value type for boundary operators, incidence
// matrices and combinatorial Laplacians. Entries stay well within int64 for
// those objects; products are accumulated in 128 bits and checked.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix diagonal(const std::vector<std::int64_t>& d) {
    IntMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::int64_t& operator()(std::size_t i, std::size_t j) {
    return a_[i * cols_ + j];
  }
  std::int64_t operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  IntMatrix transposed() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw Error("matrix product: shape mismatch");
    IntMatrix c(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const std::int64_t aik = (*this)(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) {
          const __int128 v =
              static_cast<__int128>(c(i, j)) +
              static_cast<__int128>(aik) * static_cast<__int128>(o(k, j));
          if (v > std::numeric_limits<std::int64_t>::max() ||
              v < std::numeric_limits<std::int64_t>::min())
            throw Overflow("matrix product exceeds 64-bit range");
          c(i, j) = static_cast<std::int64_t>(v);
        }
      }
    }
    return c;
  }

  IntMatrix operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw Error("matrix sum: shape mismatch");
    IntMatrix c(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) c.a_[k] = a_[k] + o.a_[k];
    return c;
  }

  bool is_zero() const {
    for (std::int64_t v : a_)
      if (v != 0) return false;
    return true;
  }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  // Sum of squared entries (exact; these matrices are small-entry).
  std::int64_t frobenius_norm_sq() const {
    std::int64_t s = 0;
    for (std::int64_t v : a_) s += v * v;
    return s;
  }

  std::size_t column_support(std::size_t j) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < rows_; ++i)
      if ((*this)(i, j) != 0) ++n;
    return n;
  }

  IntMatrix abs() const {
    IntMatrix c(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k)
      c.a_[k] = a_[k] < 0 ? -a_[k] : a_[k];
    return c;
  }

  Eigen::MatrixXd to_real() const {
    Eigen::MatrixXd m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            static_cast<double>((*this)(i, j));
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> a_;
};

}  // namespace torscan
