#pragma once

#include "systolic/complex.hpp"
#include "systolic/lattice.hpp"

#include <cstdint>
#include <vector>

namespace systolic {

/// k-gon of total length `length`.
MetricComplex circle_mesh(int k, double length);
/// Path with k edges of total length `length`.
MetricComplex segment_mesh(int k, double length);
/// Boundary of the n-simplex (a combinatorial (n-1)-sphere), all edges `edge`.
MetricComplex simplex_boundary(int n, double edge = 1.0);
/// Six-vertex projective plane, all edges `edge`.
MetricComplex rp2_mesh(double edge = 1.0);
/// Edge length giving the six-vertex projective plane unit area.
double rp2_unit_area_edge();
/// Unit cube split into 6 tetrahedra along the main diagonal.
MetricComplex unit_cube_mesh();

/// Kuhn triangulation of R^b / L with s subdivisions along each basis row.
/// Requires s >= 3 so that the quotient is a simplicial complex.
MetricComplex kuhn_torus(const LatticeBasis &lattice, int s);
/// m^n unit grid torus (Kuhn triangulation of the cubes).
MetricComplex grid_torus(int n, int m);

struct FlatTorus {
  MetricComplex mesh;
  LatticeBasis basis; // basis rows actually used for the triangulation
};

/// Flat torus on a basis of L chosen so that a shortest vector runs along a
/// Kuhn edge direction and a shortest dual vector is normal to a Kuhn
/// hyperplane; among such bases the longest Kuhn edge is minimised.
FlatTorus gen_flat_torus(const LatticeBasis &lattice, int s, bool normalize = false);

/// Edge lengths multiplied by independent factors uniform in
/// [1 - amplitude, 1 + amplitude], redrawn until every simplex is
/// nondegenerate. Deterministic in `seed`.
PLMetric perturbed_metric(const SimplicialComplex &x, const PLMetric &g, double amplitude, std::uint64_t seed);

/// Vertex map of the m_fine^n grid torus onto the m_coarse^n one
/// (m_fine = k m_coarse), i -> floor(i / k) in each coordinate.
std::vector<int> grid_collapse_map(int n, int m_fine, int m_coarse);

} // namespace systolic
