#include <vector>

#include "doctest.h"
#include "torscan/simplicial_complex.hpp"

using namespace torscan;

namespace {

SimplicialComplex hollow_triangle() {
  return SimplicialComplex::from_facets({{0, 1}, {1, 2}, {0, 2}}, 3);
}

std::vector<SimplicialComplex> all_fixtures() {
  return {make_sphere(2), make_sphere(3), make_torus(), make_projective_plane(),
          make_klein_bottle()};
}

}  // namespace

TEST_SUITE_BEGIN("simplicial_complex");

TEST_CASE("from_facets closes the tetrahedron boundary downward") {
  const auto k =
      SimplicialComplex::from_facets({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}, 4);
  CHECK(k.count(0) == 4);
  CHECK(k.count(1) == 6);
  CHECK(k.count(2) == 4);
  CHECK(k.dim() == 2);
}

TEST_CASE("from_facets handles a single point") {
  const auto k = SimplicialComplex::from_facets({{0}}, 1);
  CHECK(k.count(0) == 1);
  CHECK(k.dim() == 0);
}

TEST_CASE("from_facets keeps a hollow triangle hollow") {
  const auto k = hollow_triangle();
  CHECK(k.count(1) == 3);
  CHECK(k.count(2) == 0);
  CHECK(k.dim() == 1);
}

TEST_CASE("from_facets accepts unsorted input and stores sorted tuples") {
  const auto k = SimplicialComplex::from_facets({{2, 0, 1}}, 3);
  CHECK(k.simplices(2)[0] == Simplex{0, 1, 2});
}

TEST_CASE("from_facets rejects bad facets") {
  CHECK_THROWS_AS(SimplicialComplex::from_facets({{0, 0, 1}}, 3),
                  DuplicateVertexInSimplex);
  CHECK_THROWS_AS(SimplicialComplex::from_facets({{0, 5}}, 3),
                  VertexIdOutOfRange);
  CHECK_THROWS_AS(SimplicialComplex::from_facets({{-1, 0}}, 3),
                  VertexIdOutOfRange);
}

TEST_CASE("closure invariant: every face of every simplex is present") {
  for (const auto& k : all_fixtures()) {
    for (int r = 1; r <= k.dim(); ++r) {
      for (const Simplex& s : k.simplices(r)) {
        for (std::size_t omit = 0; omit < s.size(); ++omit) {
          Simplex face;
          for (std::size_t i = 0; i < s.size(); ++i)
            if (i != omit) face.push_back(s[i]);
          CHECK(k.index_of(r - 1, face).has_value());
        }
      }
    }
  }
}

TEST_CASE("fixture simplex counts and Euler characteristics") {
  const auto s2 = make_sphere(2);
  CHECK(euler_characteristic(s2) == 2);

  const auto s3 = make_sphere(3);
  CHECK(s3.count(0) == 5);
  CHECK(s3.count(3) == 5);
  CHECK(euler_characteristic(s3) == 0);

  const auto torus = make_torus();
  CHECK(torus.count(0) == 7);
  CHECK(torus.count(1) == 21);
  CHECK(torus.count(2) == 14);
  CHECK(euler_characteristic(torus) == 0);

  const auto rp2 = make_projective_plane();
  CHECK(rp2.count(0) == 6);
  CHECK(rp2.count(1) == 15);
  CHECK(rp2.count(2) == 10);
  CHECK(euler_characteristic(rp2) == 1);

  const auto klein = make_klein_bottle();
  CHECK(klein.count(0) == 9);
  CHECK(klein.count(1) == 27);
  CHECK(klein.count(2) == 18);
  CHECK(euler_characteristic(klein) == 0);
}

TEST_CASE("surface fixtures have every edge in exactly two triangles") {
  for (const auto& k : {make_torus(), make_projective_plane(),
                        make_klein_bottle(), make_sphere(2)}) {
    const IntMatrix inc = incidence_matrix(k, 2);
    for (std::size_t i = 0; i < inc.rows(); ++i) {
      int uses = 0;
      for (std::size_t j = 0; j < inc.cols(); ++j) uses += static_cast<int>(inc(i, j));
      CHECK(uses == 2);
    }
  }
}

TEST_CASE("make_space covers the CLI names") {
  CHECK(make_space("sphere2") == make_sphere(2));
  CHECK(make_space("klein") == make_klein_bottle());
  CHECK_THROWS_AS(make_space("moebius"), UnsupportedSpace);
}

TEST_CASE("parse_complex reads the documented format") {
  const auto k =
      parse_complex("facet 0 1 2\nfacet 0 1 3\nfacet 0 2 3\nfacet 1 2 3");
  CHECK(k == make_sphere(2));

  const auto pt = parse_complex("# comment\nfacet 0");
  CHECK(pt.count(0) == 1);
  CHECK(pt.dim() == 0);
}

TEST_CASE("parse_complex honours a vertices header") {
  const auto k = parse_complex("vertices 5\nfacet 0 1\n");
  CHECK(k.vertex_count() == 5);
  CHECK_THROWS_AS(parse_complex("vertices 2\nfacet 0 3\n"), VertexIdOutOfRange);
}

TEST_CASE("parse_complex errors") {
  CHECK_THROWS_AS(parse_complex(""), EmptyComplex);
  CHECK_THROWS_AS(parse_complex("# only a comment\n"), EmptyComplex);
  CHECK_THROWS_AS(parse_complex("facet 0 x 2\n"), SyntaxError);
  CHECK_THROWS_AS(parse_complex("simplex 0 1\n"), SyntaxError);
  try {
    parse_complex("facet 0 1\nfacet 1 z\n");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("serialize emits maximal simplices and round-trips the fixtures") {
  for (const auto& k : all_fixtures()) {
    CHECK(parse_complex(serialize(k)) == k);
  }
  // hollow triangle: the edges themselves are maximal
  const std::string text = serialize(hollow_triangle());
  CHECK(text == "vertices 3\nfacet 0 1\nfacet 0 2\nfacet 1 2\n");
}

TEST_CASE("declared vertex count survives the round trip") {
  const auto k = SimplicialComplex::from_facets({{0}}, 3);
  CHECK(serialize(k) == "vertices 3\nfacet 0\n");
  CHECK(parse_complex(serialize(k)) == k);
}

TEST_CASE("incidence matrix shapes and column sums") {
  const IntMatrix tri = incidence_matrix(hollow_triangle(), 1);
  CHECK(tri.rows() == 3);
  CHECK(tri.cols() == 3);
  for (std::size_t j = 0; j < 3; ++j) CHECK(tri.column_support(j) == 2);

  const IntMatrix s2 = incidence_matrix(make_sphere(2), 2);
  CHECK(s2.rows() == 6);
  CHECK(s2.cols() == 4);
  for (std::size_t j = 0; j < 4; ++j) CHECK(s2.column_support(j) == 3);

  const IntMatrix rp2 = incidence_matrix(make_projective_plane(), 2);
  CHECK(rp2.rows() == 15);
  CHECK(rp2.cols() == 10);
  for (std::size_t j = 0; j < 10; ++j) CHECK(rp2.column_support(j) == 3);

  CHECK_THROWS_AS(incidence_matrix(make_sphere(2), 3), DimensionOutOfRange);
  CHECK_THROWS_AS(incidence_matrix(make_sphere(2), 0), DimensionOutOfRange);
}

TEST_CASE("boundary of a filled triangle follows the sign rule") {
  const auto k = SimplicialComplex::from_facets({{0, 1, 2}}, 3);
  const IntMatrix b = boundary_matrix(k, 2);
  // rows are edges sorted lexicographically: [0,1], [0,2], [1,2]
  CHECK(b(0, 0) == 1);   // omit vertex 2 -> +[0,1]
  CHECK(b(1, 0) == -1);  // omit vertex 1 -> -[0,2]
  CHECK(b(2, 0) == 1);   // omit vertex 0 -> +[1,2]
}

TEST_CASE("boundary of an edge") {
  const auto k = SimplicialComplex::from_facets({{0, 1}}, 2);
  const IntMatrix b = boundary_matrix(k, 1);
  CHECK(b(0, 0) == -1);
  CHECK(b(1, 0) == 1);
}

TEST_CASE("boundary Frobenius norm is (r+1)|S_r|") {
  const auto s2 = make_sphere(2);
  CHECK(boundary_matrix(s2, 2).frobenius_norm_sq() == 12);
  for (const auto& k : all_fixtures()) {
    for (int r = 1; r <= k.dim(); ++r) {
      CHECK(boundary_matrix(k, r).frobenius_norm_sq() ==
            static_cast<std::int64_t>(r + 1) *
                static_cast<std::int64_t>(k.count(r)));
    }
  }
}

TEST_CASE("boundary squares to zero and matches the incidence pattern") {
  for (const auto& k : all_fixtures()) {
    for (int r = 1; r + 1 <= k.dim(); ++r) {
      CHECK((boundary_matrix(k, r) * boundary_matrix(k, r + 1)).is_zero());
    }
    for (int r = 1; r <= k.dim(); ++r) {
      const IntMatrix b = boundary_matrix(k, r);
      CHECK(b.abs() == incidence_matrix(k, r));
      for (std::size_t j = 0; j < b.cols(); ++j)
        CHECK(b.column_support(j) == static_cast<std::size_t>(r) + 1);
    }
  }
}

TEST_CASE("laplacian of the tetrahedron skeleton at r=0 is the K4 graph Laplacian") {
  const IntMatrix lap = laplacian(make_sphere(2), 0);
  CHECK(lap.rows() == 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(lap(i, j) == (i == j ? 3 : -1));
}

TEST_CASE("laplacian edge cases") {
  const auto pt = SimplicialComplex::from_facets({{0}}, 1);
  const IntMatrix zero = laplacian(pt, 0);
  CHECK(zero.rows() == 1);
  CHECK(zero(0, 0) == 0);

  const IntMatrix tri = laplacian(hollow_triangle(), 1);
  CHECK(tri.rows() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(tri(i, i) == 2);
  CHECK(tri.is_symmetric());

  CHECK_THROWS_AS(laplacian(pt, 1), DimensionOutOfRange);
}

TEST_SUITE_END();
