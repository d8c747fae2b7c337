#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "torscan/errors.hpp"
#include "torscan/matrix.hpp"

namespace torscan {

using Simplex = std::vector<int>;  // strictly increasing vertex ids

// Finite abstract simplicial complex. Simplices are stored per dimension,
// sorted lexicographically, and the structure is closed under taking faces.
// Instances are immutable after construction and safe to share across threads.
class SimplicialComplex {
 public:
  // Downward closure of the given facets over n_vertices labelled vertices.
  static SimplicialComplex from_facets(const std::vector<Simplex>& facets,
                                       int n_vertices) {
    std::vector<std::set<Simplex>> by_dim;
    for (const Simplex& f : facets) {
      Simplex s = f;
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw DuplicateVertexInSimplex("simplex repeats a vertex id");
      for (int v : s) {
        if (v < 0 || v >= n_vertices)
          throw VertexIdOutOfRange("vertex id " + std::to_string(v) +
                                   " not in [0, " + std::to_string(n_vertices) +
                                   ")");
      }
      if (s.empty()) continue;
      insert_with_faces(by_dim, s);
    }
    SimplicialComplex k;
    k.n_vertices_ = n_vertices;
    for (const auto& level : by_dim)
      k.by_dim_.emplace_back(level.begin(), level.end());
    k.build_index();
    return k;
  }

  int vertex_count() const { return n_vertices_; }

  // Largest r with S_r nonempty; -1 for the complex with no simplices.
  int dim() const { return static_cast<int>(by_dim_.size()) - 1; }

  // |S_r|; zero above the dimension.
  std::size_t count(int r) const {
    if (r < 0 || r > dim()) return 0;
    return by_dim_[static_cast<std::size_t>(r)].size();
  }

  const std::vector<Simplex>& simplices(int r) const {
    if (r < 0 || r > dim())
      throw DimensionOutOfRange("no simplices of dimension " +
                                std::to_string(r));
    return by_dim_[static_cast<std::size_t>(r)];
  }

  std::optional<std::size_t> index_of(int r, const Simplex& s) const {
    if (r < 0 || r > dim()) return std::nullopt;
    const auto& idx = index_[static_cast<std::size_t>(r)];
    auto it = idx.find(s);
    if (it == idx.end()) return std::nullopt;
    return it->second;
  }

  // Facets: simplices that are not a proper face of any other simplex.
  std::vector<Simplex> maximal_simplices() const {
    std::vector<Simplex> out;
    for (int r = 0; r <= dim(); ++r) {
      for (const Simplex& s : simplices(r)) {
        bool covered = false;
        if (r + 1 <= dim()) {
          for (const Simplex& t : simplices(r + 1)) {
            if (std::includes(t.begin(), t.end(), s.begin(), s.end())) {
              covered = true;
              break;
            }
          }
        }
        if (!covered) out.push_back(s);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool operator==(const SimplicialComplex& o) const {
    return n_vertices_ == o.n_vertices_ && by_dim_ == o.by_dim_;
  }

 private:
  static void insert_with_faces(std::vector<std::set<Simplex>>& by_dim,
                                const Simplex& s) {
    const std::size_t r = s.size() - 1;
    if (by_dim.size() <= r) by_dim.resize(r + 1);
    if (!by_dim[r].insert(s).second) return;
    if (r == 0) return;
    Simplex face;
    face.reserve(r);
    for (std::size_t omit = 0; omit < s.size(); ++omit) {
      face.clear();
      for (std::size_t i = 0; i < s.size(); ++i)
        if (i != omit) face.push_back(s[i]);
      insert_with_faces(by_dim, face);
    }
  }

  void build_index() {
    index_.clear();
    index_.resize(by_dim_.size());
    for (std::size_t r = 0; r < by_dim_.size(); ++r)
      for (std::size_t j = 0; j < by_dim_[r].size(); ++j)
        index_[r][by_dim_[r][j]] = j;
  }

  int n_vertices_ = 0;
  std::vector<std::vector<Simplex>> by_dim_;
  std::vector<std::map<Simplex, std::size_t>> index_;
};

// ---------------------------------------------------------------------------
// Canonical triangulations
// ---------------------------------------------------------------------------

// Boundary of the (d+1)-simplex: the minimal triangulation of S^d.
inline SimplicialComplex make_sphere(int d) {
  if (d < 1) throw UnsupportedSpace("sphere dimension must be >= 1");
  const int n = d + 2;
  std::vector<Simplex> facets;
  // all (d+1)-subsets of {0..d+1}
  std::vector<int> pick(static_cast<std::size_t>(d) + 1);
  for (int omit = 0; omit < n; ++omit) {
    pick.clear();
    for (int v = 0; v < n; ++v)
      if (v != omit) pick.push_back(v);
    facets.push_back(pick);
  }
  return SimplicialComplex::from_facets(facets, n);
}

// Csaszar's 7-vertex torus: cyclic orbits of {0,1,3} and {0,2,3} mod 7.
inline SimplicialComplex make_torus() {
  static const std::vector<Simplex> facets = {
      {0, 1, 3}, {0, 1, 5}, {0, 2, 3}, {0, 2, 6}, {0, 4, 5},
      {0, 4, 6}, {1, 2, 4}, {1, 2, 6}, {1, 3, 4}, {1, 5, 6},
      {2, 3, 5}, {2, 4, 5}, {3, 4, 6}, {3, 5, 6}};
  return SimplicialComplex::from_facets(facets, 7);
}

// The 6-vertex triangulation of the real projective plane (icosahedron
// quotient); chi = 1, H_1 = Z_2.
inline SimplicialComplex make_projective_plane() {
  static const std::vector<Simplex> facets = {
      {0, 1, 3}, {0, 1, 4}, {0, 2, 3}, {0, 2, 5}, {0, 4, 5},
      {1, 2, 4}, {1, 2, 5}, {1, 3, 5}, {2, 3, 4}, {3, 4, 5}};
  return SimplicialComplex::from_facets(facets, 6);
}

// 9-vertex Klein bottle: quotient of a 3x3 grid square with one orientation-
// reversing identification; chi = 0, H_1 = Z + Z_2.
inline SimplicialComplex make_klein_bottle() {
  static const std::vector<Simplex> facets = {
      {0, 1, 4}, {0, 1, 6}, {0, 2, 6}, {0, 2, 8}, {0, 3, 4}, {0, 3, 8},
      {1, 2, 5}, {1, 2, 7}, {1, 4, 5}, {1, 6, 7}, {2, 5, 6}, {2, 7, 8},
      {3, 4, 7}, {3, 5, 6}, {3, 5, 8}, {3, 6, 7}, {4, 5, 8}, {4, 7, 8}};
  return SimplicialComplex::from_facets(facets, 9);
}

// Factory used by the CLI; names match the --space flag values.
inline SimplicialComplex make_space(std::string_view name) {
  if (name == "sphere2") return make_sphere(2);
  if (name == "sphere3") return make_sphere(3);
  if (name == "torus") return make_torus();
  if (name == "rp2") return make_projective_plane();
  if (name == "klein") return make_klein_bottle();
  throw UnsupportedSpace("unknown space: " + std::string(name));
}

// ---------------------------------------------------------------------------
// Facet-file codec
// ---------------------------------------------------------------------------
//
// UTF-8 text, one record per line:
//   # comment
//   vertices N
//   facet v0 v1 ... vk
// Vertex count defaults to (max id + 1) when no header is present.

inline SimplicialComplex parse_complex(std::string_view text) {
  std::vector<Simplex> facets;
  std::optional<int> declared_vertices;
  int max_id = -1;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    std::string trimmed(line);
    std::istringstream in(trimmed);
    std::string tag;
    if (!(in >> tag)) continue;  // blank line
    if (tag[0] == '#') continue;

    if (tag == "vertices") {
      int n;
      if (!(in >> n) || n < 0)
        throw SyntaxError(line_no, "expected 'vertices N'");
      declared_vertices = n;
      continue;
    }
    if (tag != "facet")
      throw SyntaxError(line_no, "unknown directive '" + tag + "'");

    Simplex s;
    long long v;
    while (in >> v) {
      if (v < 0) throw SyntaxError(line_no, "negative vertex id");
      s.push_back(static_cast<int>(v));
      max_id = std::max(max_id, static_cast<int>(v));
    }
    if (!in.eof()) throw SyntaxError(line_no, "vertex ids must be integers");
    if (s.empty()) throw SyntaxError(line_no, "facet with no vertices");
    facets.push_back(std::move(s));
  }

  if (facets.empty()) throw EmptyComplex("no facets in input");
  const int n_vertices = declared_vertices.value_or(max_id + 1);
  if (max_id >= n_vertices)
    throw VertexIdOutOfRange("facet vertex id exceeds declared vertex count");
  return SimplicialComplex::from_facets(facets, n_vertices);
}

inline std::string serialize(const SimplicialComplex& k) {
  std::ostringstream out;
  out << "vertices " << k.vertex_count() << "\n";
  for (const Simplex& s : k.maximal_simplices()) {
    out << "facet";
    for (int v : s) out << ' ' << v;
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Structure matrices
// ---------------------------------------------------------------------------

// Unsigned face-incidence matrix D_r of size |S_{r-1}| x |S_r|; each column
// has exactly r+1 ones.
inline IntMatrix incidence_matrix(const SimplicialComplex& k, int r) {
  if (r < 1 || r > k.dim())
    throw DimensionOutOfRange("incidence matrix needs 1 <= r <= dim");
  const auto& rows = k.simplices(r - 1);
  const auto& cols = k.simplices(r);
  IntMatrix m(rows.size(), cols.size());
  Simplex face;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const Simplex& s = cols[j];
    for (std::size_t omit = 0; omit < s.size(); ++omit) {
      face.clear();
      for (std::size_t i = 0; i < s.size(); ++i)
        if (i != omit) face.push_back(s[i]);
      m(*k.index_of(r - 1, face), j) = 1;
    }
  }
  return m;
}

// Signed boundary operator in the lexicographically sorted bases. Column j
// carries (-1)^i at the face omitting the i-th smallest vertex, so the sign
// convention is fixed by the sorted vertex order.
inline IntMatrix boundary_matrix(const SimplicialComplex& k, int r) {
  if (r < 1 || r > k.dim())
    throw DimensionOutOfRange("boundary matrix needs 1 <= r <= dim");
  const auto& rows = k.simplices(r - 1);
  const auto& cols = k.simplices(r);
  IntMatrix m(rows.size(), cols.size());
  Simplex face;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const Simplex& s = cols[j];
    for (std::size_t omit = 0; omit < s.size(); ++omit) {
      face.clear();
      for (std::size_t i = 0; i < s.size(); ++i)
        if (i != omit) face.push_back(s[i]);
      m(*k.index_of(r - 1, face), j) = (omit % 2 == 0) ? 1 : -1;
    }
  }
  return m;
}

// Combinatorial Laplacian: d_{r+1} d_{r+1}^T + d_r^T d_r, with the missing
// term taken as zero at r = 0 and r = dim.
inline IntMatrix laplacian(const SimplicialComplex& k, int r) {
  if (r < 0 || r > k.dim())
    throw DimensionOutOfRange("laplacian needs 0 <= r <= dim");
  const std::size_t n = k.count(r);
  IntMatrix acc(n, n);
  if (r >= 1) {
    const IntMatrix b = boundary_matrix(k, r);
    acc = acc + b.transposed() * b;
  }
  if (r + 1 <= k.dim()) {
    const IntMatrix b = boundary_matrix(k, r + 1);
    acc = acc + b * b.transposed();
  }
  return acc;
}

inline std::int64_t euler_characteristic(const SimplicialComplex& k) {
  std::int64_t chi = 0;
  for (int r = 0; r <= k.dim(); ++r)
    chi += (r % 2 == 0) ? static_cast<std::int64_t>(k.count(r))
                        : -static_cast<std::int64_t>(k.count(r));
  return chi;
}

}  // namespace torscan
