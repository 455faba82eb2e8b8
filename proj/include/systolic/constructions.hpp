#pragma once

#include "systolic/complex.hpp"

#include <iosfwd>
#include <vector>

namespace systolic {

/// Finite group by multiplication table over elements 0..m-1.
struct FiniteGroup {
  std::vector<std::vector<int>> table;
  int identity = 0;

  int order() const { return static_cast<int>(table.size()); }
  int mul(int a, int b) const { return table[a][b]; }
  int inverse(int a) const;

  static FiniteGroup cyclic(int m);
  /// (Z/2)^d with elements as bitmasks.
  static FiniteGroup z2_power(int d);
  /// Throws unless the table is a group (closure, identity, inverses, associativity).
  void check() const;
};

/// Edge colouring: crossing edge e from its lower to its higher vertex
/// multiplies the sheet on the right by `edge_color[e]`.
struct CoverSpec {
  FiniteGroup group;
  std::vector<int> edge_color;
};

/// First triangle (index) whose boundary product is not the identity, or -1.
int first_non_flat_triangle(const SimplicialComplex &x, const CoverSpec &c);

struct CoverResult {
  MetricComplex mesh;
  int components = 0;
  /// Base vertex of each cover vertex; cover vertex id = sheet * V + base.
  std::vector<int> projection;
};

CoverResult build_cover(const SimplicialComplex &x, const PLMetric &g, const CoverSpec &c);

/// Z/m cover given by an integral 1-cocycle reduced mod m.
CoverSpec cyclic_cover(const SimplicialComplex &x, const Eigen::Matrix<long long, Eigen::Dynamic, 1> &cocycle, int m);
/// (Z/2)^d cover from d mod-2 cocycles.
CoverSpec z2_cover(const SimplicialComplex &x, const std::vector<Gf2Vector> &cocycles);

/// Colouring file: `group m`, optional `row g0 .. g(m-1)` table lines (cyclic
/// group if omitted), `color u v g` lines; unlisted edges carry the identity.
CoverSpec read_coloring(std::istream &in, const SimplicialComplex &x);
void write_coloring(std::ostream &out, const SimplicialComplex &x, const CoverSpec &c);

/// Staircase triangulation of X x Y with the orthogonal product metric.
/// Vertex (x, y) gets id x * V_Y + y.
MetricComplex product_complex(const SimplicialComplex &x, const PLMetric &gx, const SimplicialComplex &y,
                              const PLMetric &gy);

/// Simplicial map given by vertex images.
bool is_simplicial_map(const SimplicialComplex &x, const std::vector<int> &f, const SimplicialComplex &y);

struct PullbackResult {
  PLMetric metric;
  std::vector<bool> collapsed;
  /// Factor applied to the non-collapsed lengths to restore nondegeneracy.
  double repair_factor = 1.0;
};

PullbackResult pullback_metric(const SimplicialComplex &x, const std::vector<int> &f, const SimplicialComplex &y,
                               const PLMetric &gy, double eps);

} // namespace systolic
