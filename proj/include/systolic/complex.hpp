#pragma once

#include "systolic/gf2.hpp"
#include "systolic/lattice.hpp"

#include <Eigen/Dense>

#include <map>
#include <span>
#include <string>
#include <vector>

namespace systolic {

/// Sorted vertex tuple.
using Simplex = std::vector<int>;

/// Finite simplicial complex given by its maximal simplices; all faces are
/// generated and indexed (lexicographically within each dimension).
class SimplicialComplex {
public:
  SimplicialComplex() = default;
  SimplicialComplex(int num_vertices, std::vector<Simplex> maximal);

  int dimension() const { return static_cast<int>(simplices_.size()) - 1; }
  int num_vertices() const { return num_vertices_; }
  std::size_t count(int k) const { return k >= 0 && k <= dimension() ? simplices_[k].size() : 0; }
  const std::vector<Simplex> &simplices(int k) const { return simplices_.at(k); }
  const Simplex &simplex(int k, int i) const { return simplices_.at(k).at(i); }
  const std::vector<Simplex> &maximal() const { return maximal_; }

  /// Index of a (sorted) simplex, or -1.
  int find(const Simplex &s) const;
  /// Index of the edge {u, v}, or -1.
  int edge(int u, int v) const;

  /// Faces of the k-simplex i; entry j omits vertex j and carries sign (-1)^j.
  std::span<const int> faces(int k, int i) const;
  /// (k+1)-simplices containing the k-simplex i.
  const std::vector<int> &cofaces(int k, int i) const { return cofaces_.at(k).at(i); }

  /// Integer boundary matrix C_k -> C_{k-1} (rows: (k-1)-simplices).
  IntMatrix boundary_matrix(int k) const;
  /// Rows of the mod-2 boundary matrix C_k -> C_{k-1}, each a vector over C_k.
  std::vector<Gf2Vector> boundary_rows_mod2(int k) const;

  long long euler_characteristic() const;

private:
  int num_vertices_ = 0;
  std::vector<Simplex> maximal_;
  std::vector<std::vector<Simplex>> simplices_;
  std::vector<std::map<Simplex, int>> index_;
  std::vector<std::vector<int>> faces_;
  std::vector<std::vector<std::vector<int>>> cofaces_;
};

/// Edge lengths indexed like `SimplicialComplex::simplices(1)`.
using PLMetric = Eigen::VectorXd;

struct MetricComplex {
  SimplicialComplex complex;
  PLMetric metric;
};

enum class Ring { Integer, Mod2, Real };

/// Coefficient-tagged simplicial chain; values indexed like simplices(degree)
/// with the sorted-vertex orientation.
template <typename Scalar> struct Chain {
  int degree = 0;
  Ring ring = Ring::Integer;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
};

template <typename Scalar> struct Cochain {
  int degree = 0;
  Ring ring = Ring::Integer;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
};

/// Signed edge value of a 1-cochain along the oriented edge u -> v.
template <typename Scalar>
Scalar oriented_value(const SimplicialComplex &x, const Cochain<Scalar> &c, int u, int v) {
  const int e = x.edge(u, v);
  return u < v ? c.values(e) : -c.values(e);
}

/// Coboundary of a 0-cochain: (du)(a, b) = u(b) - u(a) for a < b.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> coboundary0(const SimplicialComplex &x,
                                                                       const Eigen::MatrixBase<Derived> &u) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(x.count(1));
  for (std::size_t e = 0; e < x.count(1); ++e) {
    const auto &s = x.simplex(1, static_cast<int>(e));
    out(e) = u(s[1]) - u(s[0]);
  }
  return out;
}

struct Diagnostics {
  bool vertices_in_range = true;
  bool connected = true;
  bool pseudomanifold = true;
  bool orientable = true;
  bool metric_valid = true;
  /// Human-readable issues, first violation first.
  std::vector<std::string> issues;

  bool ok(bool manifold_mode = true) const {
    return vertices_in_range && connected && metric_valid && (!manifold_mode || pseudomanifold);
  }
};

/// Structural and metric checks; nothing is repaired.
Diagnostics validate(const SimplicialComplex &x, const PLMetric &g);

/// Whether every (n-1)-simplex lies in exactly two n-simplices and all maximal simplices are n-dimensional.
bool is_closed_pseudomanifold(const SimplicialComplex &x);
bool is_connected(const SimplicialComplex &x);
/// Coherent orientation of the top simplices (signs +-1), or empty if none exists.
std::vector<int> coherent_orientation(const SimplicialComplex &x);

/// Total n-volume.
double volume(const SimplicialComplex &x, const PLMetric &g);

/// Throws std::invalid_argument unless `validate(x, g).ok(manifold_mode)`.
void require_valid(const SimplicialComplex &x, const PLMetric &g, bool manifold_mode);

/// Plain-text mesh: `dim n`, `vertices V`, `simplex v0 .. vn`, `edgelen u v l`.
MetricComplex read_mesh(std::istream &in);
MetricComplex read_mesh_file(const std::string &path);
void write_mesh(std::ostream &out, const SimplicialComplex &x, const PLMetric &g);

} // namespace systolic
