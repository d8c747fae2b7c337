#include <cstdint>
#include <vector>

#include "doctest.h"
#include "torscan/exact_linalg.hpp"
#include "torscan/rng.hpp"
#include "torscan/simplicial_complex.hpp"

using namespace torscan;

namespace {

// Independent oracle: plain row-echelon elimination over F_p that scans
// columns right-to-left, so its pivot choices differ from rank_ff's.
std::int64_t brute_rank_mod_p(const IntMatrix& a, std::int64_t p) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<std::vector<std::int64_t>> w(m, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      w[i][j] = ((a(i, j) % p) + p) % p;
  std::size_t rank = 0;
  for (std::size_t cc = n; cc-- > 0 && rank < m;) {
    std::size_t pivot = rank;
    while (pivot < m && w[pivot][cc] == 0) ++pivot;
    if (pivot == m) continue;
    std::swap(w[rank], w[pivot]);
    const std::int64_t inv = fp_inverse(w[rank][cc], p);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == rank || w[i][cc] == 0) continue;
      const std::int64_t f = (w[i][cc] * inv) % p;
      for (std::size_t j = 0; j < n; ++j)
        w[i][j] = ((w[i][j] - f * w[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return static_cast<std::int64_t>(rank);
}

// Independent oracle for tiny matrices: rank = largest k with a nonzero
// k x k minor, determinants by cofactor expansion over exact integers.
mpz_class minor_det(const IntMatrix& a, const std::vector<std::size_t>& rows,
                    const std::vector<std::size_t>& cols) {
  if (rows.size() == 1) return mpz_class(a(rows[0], cols[0]));
  mpz_class acc = 0;
  std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (a(rows[0], cols[j]) == 0) continue;
    std::vector<std::size_t> sub_cols;
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (k != j) sub_cols.push_back(cols[k]);
    const mpz_class term =
        mpz_class(a(rows[0], cols[j])) * minor_det(a, sub_rows, sub_cols);
    acc += (j % 2 == 0) ? term : -term;
  }
  return acc;
}

std::int64_t brute_rank_by_minors(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  const std::size_t kmax = std::min(m, n);
  for (std::size_t k = kmax; k >= 1; --k) {
    // enumerate all k-subsets of rows and columns
    std::vector<std::size_t> rows(k), cols(k);
    std::vector<bool> row_mask(m, false), col_mask(n, false);
    std::fill(row_mask.begin(), row_mask.begin() + static_cast<long>(k), true);
    do {
      std::size_t ri = 0;
      for (std::size_t i = 0; i < m; ++i)
        if (row_mask[i]) rows[ri++] = i;
      std::fill(col_mask.begin(), col_mask.end(), false);
      std::fill(col_mask.begin(), col_mask.begin() + static_cast<long>(k), true);
      do {
        std::size_t ci = 0;
        for (std::size_t j = 0; j < n; ++j)
          if (col_mask[j]) cols[ci++] = j;
        if (minor_det(a, rows, cols) != 0) return static_cast<std::int64_t>(k);
      } while (std::prev_permutation(col_mask.begin(), col_mask.end()));
    } while (std::prev_permutation(row_mask.begin(), row_mask.end()));
  }
  return 0;
}

IntMatrix random_int_matrix(std::size_t m, std::size_t n, std::int64_t lo,
                            std::int64_t hi, std::uint64_t seed) {
  rng::Stream stream(seed, 0);
  IntMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = lo + static_cast<std::int64_t>(
                         stream.below(static_cast<std::uint64_t>(hi - lo + 1)));
  return a;
}

}  // namespace

TEST_SUITE_BEGIN("exact_linalg");

TEST_CASE("integer matrix products refuse to overflow silently") {
  IntMatrix a(1, 1);
  a(0, 0) = std::int64_t{1} << 62;
  CHECK_THROWS_AS(a * a, Overflow);
}

TEST_CASE("balanced residues") {
  CHECK(fp_balance(2, 3) == -1);
  CHECK(fp_balance(-2, 3) == 1);
  CHECK(fp_balance(7, 3) == 1);
  CHECK(fp_balance(4, 2) == 0);
  CHECK(fp_balance(-1, 2) == 1);  // p = 2 uses {0, 1}
  CHECK(fp_balance(3, 7) == 3);
  CHECK(fp_balance(4, 7) == -3);
}

TEST_CASE("fp_inverse is a two-sided inverse") {
  for (std::int64_t p : {2, 3, 5, 7, 11, 101}) {
    for (std::int64_t a = 1; a < p; ++a) {
      const std::int64_t inv = fp_inverse(a, p);
      CHECK(fp_balance(a * inv, p) == 1);
    }
  }
}

TEST_CASE("primality guard") {
  CHECK(is_prime(2));
  CHECK(is_prime(7919));
  CHECK(!is_prime(1));
  CHECK(!is_prime(9));
  CHECK_THROWS_AS(mod_reduce(IntMatrix(1, 1), 6), NotPrime);
}

TEST_CASE("mod_reduce to balanced representatives") {
  IntMatrix a(2, 2);
  a(0, 0) = -1; a(0, 1) = 1; a(1, 0) = 0; a(1, 1) = 2;
  const FpMatrix r = mod_reduce(a, 3);
  CHECK(r(0, 0) == -1);
  CHECK(r(0, 1) == 1);
  CHECK(r(1, 0) == 0);
  CHECK(r(1, 1) == -1);

  IntMatrix b(1, 1);
  b(0, 0) = 4;
  CHECK(mod_reduce(b, 2)(0, 0) == 0);
}

TEST_CASE("boundary entries are their own representatives for odd p") {
  const IntMatrix b = boundary_matrix(make_sphere(2), 2);
  const FpMatrix r = mod_reduce(b, 5);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      CHECK(r(i, j) == b(i, j));
}

TEST_CASE("rank_ff basics") {
  CHECK(rank_ff(FpMatrix::identity(3, 4)) == 4);
  CHECK(rank_ff(FpMatrix(5, 3, 7)) == 0);
}

TEST_CASE("rank_ff of the rp2 Laplacian mod 2") {
  const IntMatrix lap = laplacian(make_projective_plane(), 1);
  const std::int64_t rank = rank_ff(mod_reduce(lap, 2));
  CHECK(rank == brute_rank_mod_p(lap, 2));
  CHECK(rank == 8);             // nullity 7: far above dim H_1(F_2) = 1
  CHECK(15 - rank == 7);
}

TEST_CASE("rank_ff agrees with an independent eliminator on random matrices") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const IntMatrix a = random_int_matrix(6, 8, -10, 10, seed);
    for (std::int64_t p : {2, 3, 5, 7})
      CHECK(rank_ff(mod_reduce(a, p)) == brute_rank_mod_p(a, p));
  }
}

TEST_CASE("rank_exact_rational on known matrices") {
  CHECK(rank_exact_rational(boundary_matrix(make_sphere(2), 1)) == 3);
  CHECK(rank_exact_rational(laplacian(make_sphere(2), 0)) == 3);
  CHECK(rank_exact_rational(IntMatrix(4, 4)) == 0);
  CHECK(rank_exact_rational(IntMatrix::identity(5)) == 5);
}

TEST_CASE("rank_exact_rational agrees with the minor-expansion oracle") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const IntMatrix a = random_int_matrix(4, 4, -4, 4, seed);
    CHECK(rank_exact_rational(a) == brute_rank_by_minors(a));
  }
  for (std::uint64_t seed = 200; seed < 210; ++seed) {
    const IntMatrix a = random_int_matrix(3, 5, -6, 6, seed);
    CHECK(rank_exact_rational(a) == brute_rank_by_minors(a));
  }
}

TEST_CASE("rank over F_p never exceeds rank over Q") {
  for (std::uint64_t seed = 300; seed < 330; ++seed) {
    const IntMatrix a = random_int_matrix(5, 7, -9, 9, seed);
    const std::int64_t rq = rank_exact_rational(a);
    for (std::int64_t p : {2, 3, 5, 7, 11})
      CHECK(rank_ff(mod_reduce(a, p)) <= rq);
  }
}

TEST_CASE("smith_normal_form on small inputs") {
  IntMatrix a(2, 2);
  a(0, 0) = 2;
  const SnfResult snf = smith_normal_form(a);
  CHECK(snf.rank == 1);
  REQUIRE(snf.invariant_factors.size() == 1);
  CHECK(snf.invariant_factors[0] == 2);
}

TEST_CASE("smith_normal_form of fixture boundary operators") {
  const SnfResult s2 = smith_normal_form(boundary_matrix(make_sphere(2), 2));
  CHECK(s2.rank == 3);
  for (const mpz_class& f : s2.invariant_factors) CHECK(f == 1);

  const SnfResult klein = smith_normal_form(boundary_matrix(make_klein_bottle(), 2));
  CHECK(klein.rank == 18);
  int twos = 0;
  for (const mpz_class& f : klein.invariant_factors) {
    if (f == 2) ++twos;
    else CHECK(f == 1);
  }
  CHECK(twos == 1);

  const SnfResult rp2 = smith_normal_form(boundary_matrix(make_projective_plane(), 2));
  CHECK(rp2.rank == 10);
  CHECK(rp2.invariant_factors.back() == 2);

  const SnfResult torus = smith_normal_form(boundary_matrix(make_torus(), 2));
  CHECK(torus.rank == 13);
  for (const mpz_class& f : torus.invariant_factors) CHECK(f == 1);
}

TEST_CASE("smith decomposition reproduces A with unimodular transforms") {
  std::vector<IntMatrix> cases;
  for (std::uint64_t seed = 400; seed < 412; ++seed)
    cases.push_back(random_int_matrix(4, 5, -5, 5, seed));
  cases.push_back(boundary_matrix(make_projective_plane(), 2));
  cases.push_back(boundary_matrix(make_klein_bottle(), 2));

  for (const IntMatrix& a : cases) {
    const SmithDecomposition dec = smith_decompose(a);
    CHECK(dec.l * BigMatrix(a) * dec.r == dec.d);
    CHECK(abs(determinant(dec.l)) == 1);
    CHECK(abs(determinant(dec.r)) == 1);
    // diagonal, nonnegative, divisibility chain
    for (std::size_t i = 0; i < dec.d.rows; ++i)
      for (std::size_t j = 0; j < dec.d.cols; ++j)
        if (i != j) CHECK(dec.d.at(i, j) == 0);
    const SnfResult snf = smith_normal_form(a);
    for (std::size_t i = 0; i + 1 < snf.invariant_factors.size(); ++i) {
      CHECK(snf.invariant_factors[i] > 0);
      CHECK(snf.invariant_factors[i + 1] % snf.invariant_factors[i] == 0);
    }
  }
}

TEST_CASE("rank_exact_rational equals the count of nonzero invariant factors") {
  for (std::uint64_t seed = 500; seed < 515; ++seed) {
    const IntMatrix a = random_int_matrix(5, 6, -7, 7, seed);
    CHECK(rank_exact_rational(a) == smith_normal_form(a).rank);
  }
}

TEST_CASE("integral homology of the fixtures") {
  const auto s2 = make_sphere(2);
  CHECK(homology_over_Z(s2, 0).betti == 1);
  CHECK(homology_over_Z(s2, 1).betti == 0);
  CHECK(homology_over_Z(s2, 1).torsion_factors.empty());
  CHECK(homology_over_Z(s2, 2).betti == 1);
  CHECK(homology_over_Z(s2, 2).torsion_factors.empty());

  const auto s3 = make_sphere(3);
  CHECK(homology_over_Z(s3, 0).betti == 1);
  CHECK(homology_over_Z(s3, 1).betti == 0);
  CHECK(homology_over_Z(s3, 2).betti == 0);
  CHECK(homology_over_Z(s3, 3).betti == 1);

  const auto torus = make_torus();
  CHECK(homology_over_Z(torus, 0).betti == 1);
  CHECK(homology_over_Z(torus, 1).betti == 2);
  CHECK(homology_over_Z(torus, 1).torsion_factors.empty());
  CHECK(homology_over_Z(torus, 2).betti == 1);

  const auto rp2 = make_projective_plane();
  CHECK(homology_over_Z(rp2, 0).betti == 1);
  CHECK(homology_over_Z(rp2, 1).betti == 0);
  CHECK(homology_over_Z(rp2, 1).torsion_factors == std::vector<std::int64_t>{2});
  CHECK(homology_over_Z(rp2, 2).betti == 0);

  const auto klein = make_klein_bottle();
  CHECK(homology_over_Z(klein, 0).betti == 1);
  CHECK(homology_over_Z(klein, 1).betti == 1);
  CHECK(homology_over_Z(klein, 1).torsion_factors == std::vector<std::int64_t>{2});
  CHECK(homology_over_Z(klein, 2).betti == 0);
  CHECK(homology_over_Z(klein, 2).torsion_factors.empty());

  CHECK_THROWS_AS(homology_over_Z(s2, 3), DimensionOutOfRange);
  CHECK_THROWS_AS(homology_over_Z(s2, -1), DimensionOutOfRange);
}

TEST_CASE("Betti numbers alternate-sum to the Euler characteristic") {
  for (const auto& k : {make_sphere(2), make_sphere(3), make_torus(),
                        make_projective_plane(), make_klein_bottle()}) {
    std::int64_t alt = 0;
    for (int r = 0; r <= k.dim(); ++r) {
      const std::int64_t b = homology_over_Z(k, r).betti;
      alt += (r % 2 == 0) ? b : -b;
    }
    CHECK(alt == euler_characteristic(k));
  }
}

TEST_SUITE_END();
