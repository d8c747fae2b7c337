#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "torscan/errors.hpp"
#include "torscan/matrix.hpp"
#include "torscan/simplicial_complex.hpp"

namespace torscan {

// ---------------------------------------------------------------------------
// F_p scalars in balanced representation
// ---------------------------------------------------------------------------
//
// Odd p uses residues in [-(p-1)/2, (p-1)/2], so the +-1 entries of boundary
// operators are their own representatives; p = 2 uses {0, 1}.

inline bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline void require_prime(std::int64_t p) {
  if (!is_prime(p)) throw NotPrime(std::to_string(p) + " is not prime");
}

// Canonical balanced residue of v mod p.
inline std::int64_t fp_balance(std::int64_t v, std::int64_t p) {
  std::int64_t r = v % p;
  if (r < 0) r += p;
  if (p > 2 && r > (p - 1) / 2) r -= p;
  return r;
}

inline std::int64_t fp_mul(std::int64_t a, std::int64_t b, std::int64_t p) {
  return fp_balance(a * b, p);
}

inline std::int64_t fp_add(std::int64_t a, std::int64_t b, std::int64_t p) {
  return fp_balance(a + b, p);
}

inline std::int64_t fp_inverse(std::int64_t a, std::int64_t p) {
  std::int64_t r = a % p;
  if (r < 0) r += p;
  if (r == 0) throw Error("inverse of zero in F_p");
  std::int64_t t = 0, new_t = 1, q = p, new_q = r;
  while (new_q != 0) {
    const std::int64_t quot = q / new_q;
    t -= quot * new_t;
    std::swap(t, new_t);
    q -= quot * new_q;
    std::swap(q, new_q);
  }
  return fp_balance(t, p);
}

class FpVector {
 public:
  FpVector(std::int64_t p, std::size_t n) : p_(p), v_(n, 0) {
    require_prime(p);
  }

  std::int64_t modulus() const { return p_; }
  std::size_t size() const { return v_.size(); }

  std::int64_t operator[](std::size_t i) const { return v_[i]; }
  void set(std::size_t i, std::int64_t value) { v_[i] = fp_balance(value, p_); }

  bool operator==(const FpVector& o) const { return p_ == o.p_ && v_ == o.v_; }

  // Squared Euclidean norm of the balanced integer representatives.
  std::int64_t norm_sq() const {
    std::int64_t s = 0;
    for (std::int64_t x : v_) s += x * x;
    return s;
  }

 private:
  std::int64_t p_;
  std::vector<std::int64_t> v_;
};

class FpMatrix {
 public:
  FpMatrix(std::int64_t p, std::size_t rows, std::size_t cols)
      : p_(p), rows_(rows), cols_(cols), a_(rows * cols, 0) {
    require_prime(p);
  }

  static FpMatrix identity(std::int64_t p, std::size_t n) {
    FpMatrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  std::int64_t modulus() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::int64_t operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }
  void set(std::size_t i, std::size_t j, std::int64_t value) {
    a_[i * cols_ + j] = fp_balance(value, p_);
  }

  bool operator==(const FpMatrix& o) const {
    return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  // A * v over F_p.
  FpVector apply(const FpVector& v) const {
    FpVector out(p_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      std::int64_t acc = 0;
      for (std::size_t j = 0; j < cols_; ++j)
        acc = fp_balance(acc + (*this)(i, j) * v[j], p_);
      out.set(i, acc);
    }
    return out;
  }

 private:
  std::int64_t p_;
  std::size_t rows_, cols_;
  std::vector<std::int64_t> a_;
};

// Entry-wise reduction to canonical balanced representatives.
inline FpMatrix mod_reduce(const IntMatrix& a, std::int64_t p) {
  require_prime(p);
  FpMatrix m(p, a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m.set(i, j, a(i, j));
  return m;
}

// Rank over F_p by Gaussian elimination with first-nonzero pivot search;
// deterministic for a given input.
inline std::int64_t rank_ff(const FpMatrix& a) {
  const std::int64_t p = a.modulus();
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<std::vector<std::int64_t>> w(m, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) w[i][j] = a(i, j);

  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t pivot = rank;
    while (pivot < m && w[pivot][col] == 0) ++pivot;
    if (pivot == m) continue;
    std::swap(w[rank], w[pivot]);
    const std::int64_t inv = fp_inverse(w[rank][col], p);
    for (std::size_t i = rank + 1; i < m; ++i) {
      if (w[i][col] == 0) continue;
      const std::int64_t f = fp_mul(w[i][col], inv, p);
      for (std::size_t j = col; j < n; ++j)
        w[i][j] = fp_balance(w[i][j] - f * w[rank][j], p);
    }
    ++rank;
  }
  return static_cast<std::int64_t>(rank);
}

// ---------------------------------------------------------------------------
// Exact arithmetic over Z (GMP-backed)
// ---------------------------------------------------------------------------

// Dense matrix of arbitrary-precision integers; workhorse for Bareiss
// elimination and Smith reduction, where intermediate entries outgrow int64.
struct BigMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<mpz_class> a;

  BigMatrix() = default;
  BigMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

  explicit BigMatrix(const IntMatrix& m) : BigMatrix(m.rows(), m.cols()) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) at(i, j) = m(i, j);
  }

  static BigMatrix identity(std::size_t n) {
    BigMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  mpz_class& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const mpz_class& at(std::size_t i, std::size_t j) const {
    return a[i * cols + j];
  }

  BigMatrix operator*(const BigMatrix& o) const {
    BigMatrix c(rows, o.cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t k = 0; k < cols; ++k) {
        if (at(i, k) == 0) continue;
        for (std::size_t j = 0; j < o.cols; ++j)
          c.at(i, j) += at(i, k) * o.at(k, j);
      }
    return c;
  }

  bool operator==(const BigMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < cols; ++k) std::swap(at(i, k), at(j, k));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < rows; ++k) std::swap(at(k, i), at(k, j));
  }
  // row i += f * row j
  void add_row(std::size_t i, std::size_t j, const mpz_class& f) {
    for (std::size_t k = 0; k < cols; ++k) at(i, k) += f * at(j, k);
  }
  void add_col(std::size_t i, std::size_t j, const mpz_class& f) {
    for (std::size_t k = 0; k < rows; ++k) at(k, i) += f * at(k, j);
  }
};

// Determinant by fraction-free (Bareiss) elimination; exact.
inline mpz_class determinant(const BigMatrix& input) {
  if (input.rows != input.cols) throw Error("determinant needs square matrix");
  BigMatrix w = input;
  const std::size_t n = w.rows;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (w.at(k, k) == 0) {
      std::size_t pivot = k + 1;
      while (pivot < n && w.at(pivot, k) == 0) ++pivot;
      if (pivot == n) return 0;
      w.swap_rows(k, pivot);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        w.at(i, j) = (w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j)) / prev;
      }
      w.at(i, k) = 0;
    }
    prev = w.at(k, k);
  }
  return n == 0 ? mpz_class(1) : mpz_class(sign * w.at(n - 1, n - 1));
}

// Rank over Q of an integer matrix via fraction-free Bareiss elimination with
// full pivot search (smallest nonzero magnitude, to curb entry growth). No
// floating point anywhere.
inline std::int64_t rank_exact_rational(const IntMatrix& a) {
  BigMatrix w(a);
  const std::size_t m = w.rows, n = w.cols;
  mpz_class prev = 1;
  std::size_t rank = 0;
  const std::size_t steps = std::min(m, n);
  for (std::size_t k = 0; k < steps; ++k) {
    // smallest-magnitude nonzero pivot in the trailing submatrix
    std::size_t pi = k, pj = k;
    bool found = false;
    for (std::size_t i = k; i < m; ++i)
      for (std::size_t j = k; j < n; ++j) {
        if (w.at(i, j) == 0) continue;
        if (!found || mpz_cmpabs(w.at(i, j).get_mpz_t(),
                                 w.at(pi, pj).get_mpz_t()) < 0) {
          pi = i;
          pj = j;
          found = true;
        }
      }
    if (!found) break;
    w.swap_rows(k, pi);
    w.swap_cols(k, pj);
    for (std::size_t i = k + 1; i < m; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        w.at(i, j) = (w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j)) / prev;
      w.at(i, k) = 0;
    }
    prev = w.at(k, k);
    ++rank;
  }
  return static_cast<std::int64_t>(rank);
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

struct SnfResult {
  std::vector<mpz_class> invariant_factors;  // d_1 | d_2 | ... | d_rank, all > 0
  std::int64_t rank = 0;
};

// Full decomposition L * A * R = D with L, R unimodular and D the Smith form.
struct SmithDecomposition {
  BigMatrix d, l, r;
};

inline SmithDecomposition smith_decompose(const IntMatrix& input) {
  BigMatrix d(input);
  const std::size_t m = d.rows, n = d.cols;
  BigMatrix l = BigMatrix::identity(m);
  BigMatrix r = BigMatrix::identity(n);

  const std::size_t steps = std::min(m, n);
  for (std::size_t t = 0; t < steps; ++t) {
    // move the smallest-magnitude nonzero of the trailing block to (t, t)
    auto locate_pivot = [&](std::size_t& bi, std::size_t& bj) {
      bool found = false;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (d.at(i, j) == 0) continue;
          if (!found || mpz_cmpabs(d.at(i, j).get_mpz_t(),
                                   d.at(bi, bj).get_mpz_t()) < 0) {
            bi = i;
            bj = j;
            found = true;
          }
        }
      return found;
    };

    std::size_t pi = t, pj = t;
    if (!locate_pivot(pi, pj)) break;  // trailing block is zero

    bool settled = false;
    while (!settled) {
      d.swap_rows(t, pi);
      l.swap_rows(t, pi);
      d.swap_cols(t, pj);
      r.swap_cols(t, pj);

      // clear the pivot column and row by integer quotients
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d.at(i, t) == 0) continue;
        const mpz_class q = d.at(i, t) / d.at(t, t);
        d.add_row(i, t, -q);
        l.add_row(i, t, -q);
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d.at(t, j) == 0) continue;
        const mpz_class q = d.at(t, j) / d.at(t, t);
        d.add_col(j, t, -q);
        r.add_col(j, t, -q);
      }

      // leftovers from inexact quotients: pick the new smallest pivot
      bool clean = true;
      for (std::size_t i = t + 1; i < m && clean; ++i)
        if (d.at(i, t) != 0) clean = false;
      for (std::size_t j = t + 1; j < n && clean; ++j)
        if (d.at(t, j) != 0) clean = false;
      if (!clean) {
        locate_pivot(pi, pj);
        continue;
      }

      // divisibility sweep: pivot must divide the whole trailing block
      settled = true;
      for (std::size_t i = t + 1; i < m && settled; ++i)
        for (std::size_t j = t + 1; j < n && settled; ++j) {
          if (d.at(i, j) % d.at(t, t) != 0) {
            d.add_row(t, i, 1);
            l.add_row(t, i, 1);
            settled = false;
            pi = t;
            pj = t;
            locate_pivot(pi, pj);
          }
        }
    }

    if (d.at(t, t) < 0) {
      for (std::size_t k = 0; k < n; ++k) d.at(t, k) = -d.at(t, k);
      for (std::size_t k = 0; k < m; ++k) l.at(t, k) = -l.at(t, k);
    }
  }
  return {std::move(d), std::move(l), std::move(r)};
}

inline SnfResult smith_normal_form(const IntMatrix& input) {
  const SmithDecomposition dec = smith_decompose(input);
  SnfResult out;
  const std::size_t steps = std::min(dec.d.rows, dec.d.cols);
  for (std::size_t i = 0; i < steps; ++i) {
    if (dec.d.at(i, i) == 0) break;
    out.invariant_factors.push_back(dec.d.at(i, i));
  }
  out.rank = static_cast<std::int64_t>(out.invariant_factors.size());
  return out;
}

// ---------------------------------------------------------------------------
// Integral homology (the ground-truth oracle)
// ---------------------------------------------------------------------------

struct HomologyGroup {
  std::int64_t betti = 0;
  std::vector<std::int64_t> torsion_factors;  // > 1, divisibility chain
};

// H_r(Z) = Z^betti + sum of Z_d for the invariant factors d > 1 of the
// (r+1)-boundary operator; betti = |S_r| - rank d_r - rank d_{r+1}.
inline HomologyGroup homology_over_Z(const SimplicialComplex& k, int r) {
  if (r < 0 || r > k.dim())
    throw DimensionOutOfRange("homology order outside [0, dim]");
  std::int64_t rank_lower = 0;  // rank of d_r
  if (r >= 1) rank_lower = smith_normal_form(boundary_matrix(k, r)).rank;

  HomologyGroup h;
  std::int64_t rank_upper = 0;  // rank of d_{r+1}
  if (r + 1 <= k.dim()) {
    const SnfResult snf = smith_normal_form(boundary_matrix(k, r + 1));
    rank_upper = snf.rank;
    for (const mpz_class& f : snf.invariant_factors) {
      if (f > 1) {
        if (!f.fits_slong_p())
          throw Overflow("torsion factor exceeds 64-bit range");
        h.torsion_factors.push_back(f.get_si());
      }
    }
  }
  h.betti = static_cast<std::int64_t>(k.count(r)) - rank_lower - rank_upper;
  return h;
}

}  // namespace torscan
