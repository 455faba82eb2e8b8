#include <doctest.h>

#include "systolic/constructions.hpp"
#include "systolic/generators.hpp"
#include "systolic/geometry.hpp"
#include "systolic/homology.hpp"

#include <random>
#include <sstream>

using namespace systolic;

namespace {

// Brute-force orientability: try every sign assignment on the top simplices.
bool brute_orientable(const SimplicialComplex &x) {
  const int n = x.dimension();
  const auto top = x.count(n);
  REQUIRE(top < 20);
  for (unsigned signs = 0; signs < (1u << top); ++signs) {
    IntVector c(static_cast<Eigen::Index>(top));
    for (std::size_t i = 0; i < top; ++i) c(i) = (signs >> i) & 1 ? 1 : -1;
    if ((x.boundary_matrix(n) * c).isZero()) return true;
  }
  return false;
}

long long rational_rank(const IntMatrix &a) {
  if (a.size() == 0) return 0;
  return Eigen::FullPivLU<Eigen::MatrixXd>(a.cast<double>()).rank();
}

std::vector<long long> rational_betti(const SimplicialComplex &x) {
  std::vector<long long> out;
  for (int k = 0; k <= x.dimension(); ++k)
    out.push_back(static_cast<long long>(x.count(k)) - rational_rank(x.boundary_matrix(k)) -
                  rational_rank(x.boundary_matrix(k + 1)));
  return out;
}

LatticeBasis random_basis(std::mt19937_64 &rng, int b) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(b, b);
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j) m(i, j) += 0.3 * u(rng);
    if (std::abs(m.determinant()) > 0.3) return LatticeBasis(m);
  }
}

} // namespace

TEST_CASE("validation diagnostics") {
  SUBCASE("degenerate triangle") {
    SimplicialComplex t(3, {{0, 1, 2}});
    PLMetric g(3);
    g << 1.0, 3.0, 1.0; // edges (0,1), (0,2), (1,2)
    const auto d = validate(t, g);
    CHECK_FALSE(d.metric_valid);
    REQUIRE_FALSE(d.issues.empty());
    CHECK(d.issues.back().find("Cayley-Menger") != std::string::npos);
  }
  SUBCASE("tetrahedron boundary") {
    const auto s2 = simplex_boundary(3);
    const auto d = validate(s2.complex, s2.metric);
    CHECK(d.ok());
    CHECK(d.orientable);
    CHECK(brute_orientable(s2.complex));
  }
  SUBCASE("projective plane") {
    const auto rp2 = rp2_mesh();
    const auto d = validate(rp2.complex, rp2.metric);
    CHECK(d.ok());
    CHECK_FALSE(d.orientable);
    CHECK_FALSE(brute_orientable(rp2.complex));
  }
  SUBCASE("open cube is not closed") {
    const auto cube = unit_cube_mesh();
    const auto d = validate(cube.complex, cube.metric);
    CHECK(d.metric_valid);
    CHECK_FALSE(d.pseudomanifold);
    CHECK(d.ok(false));
  }
}

TEST_CASE("volumes") {
  const SimplicialComplex t(3, {{0, 1, 2}});
  CHECK(volume(t, PLMetric::Ones(3)) == doctest::Approx(std::sqrt(3.0) / 4.0));
  const auto cube = unit_cube_mesh();
  CHECK(volume(cube.complex, cube.metric) == doctest::Approx(1.0).epsilon(1e-12));
  std::mt19937_64 rng(3);
  for (int b : {2, 3})
    for (int s : {3, 4}) {
      const auto l = random_basis(rng, b);
      const auto torus = kuhn_torus(l, s);
      CHECK(validate(torus.complex, torus.metric).ok());
      CHECK(volume(torus.complex, torus.metric) == doctest::Approx(l.covolume()).epsilon(1e-9));
    }
  CHECK_THROWS_AS(kuhn_torus(integer_lattice(2), 2), std::invalid_argument);
}

TEST_CASE("embedding reproduces distances") {
  Eigen::MatrixXd d2(4, 4);
  d2 << 0, 1, 2, 3, 1, 0, 1.5, 2, 2, 1.5, 0, 2.5, 3, 2, 2.5, 0;
  const auto p = simplex_embedding(d2);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK((p.row(a) - p.row(b)).squaredNorm() == doctest::Approx(d2(a, b)));
}

TEST_CASE("homology of standard spaces") {
  const auto s2 = simplex_boundary(3);
  auto h = homology_groups(s2.complex, Ring::Integer);
  CHECK(h[0].betti == 1);
  CHECK(h[1].betti == 0);
  CHECK(h[2].betti == 1);

  const auto rp2 = rp2_mesh();
  h = homology_groups(rp2.complex, Ring::Integer);
  CHECK(h[1].betti == 0);
  CHECK(h[1].torsion == std::vector<long long>{2});
  CHECK(h[2].betti == 0);
  const auto h2 = homology_groups(rp2.complex, Ring::Mod2);
  CHECK(h2[0].betti == 1);
  CHECK(h2[1].betti == 1);
  CHECK(h2[2].betti == 1);

  const auto t2 = grid_torus(2, 4);
  const auto full = homology(t2.complex, Ring::Integer);
  CHECK(full.groups[1].betti == 2);
  CHECK(full.h1_cycles.size() == 2);
  const auto d1 = t2.complex.boundary_matrix(1);
  for (const auto &c : full.h1_cycles) CHECK((d1 * c.values).isZero());

  const auto s3 = simplex_boundary(4);
  h = homology_groups(s3.complex, Ring::Integer);
  CHECK(h[1].betti == 0);
  CHECK(h[3].betti == 1);
}

TEST_CASE("homology agrees with rational rank oracle and Euler characteristic") {
  std::vector<MetricComplex> meshes{simplex_boundary(3), rp2_mesh(), grid_torus(2, 3), grid_torus(3, 3),
                                    kuhn_torus(fcc_lattice(), 3)};
  const auto c = circle_mesh(3, 1.0);
  const auto r = rp2_mesh();
  meshes.push_back(product_complex(c.complex, c.metric, r.complex, r.metric));
  for (const auto &m : meshes) {
    const auto z = homology_groups(m.complex, Ring::Integer);
    const auto q = rational_betti(m.complex);
    long long alt_z = 0, alt_2 = 0;
    const auto z2 = homology_groups(m.complex, Ring::Mod2);
    for (std::size_t k = 0; k < z.size(); ++k) {
      CHECK(z[k].betti == q[k]);
      alt_z += (k % 2 ? -1 : 1) * z[k].betti;
      alt_2 += (k % 2 ? -1 : 1) * z2[k].betti;
    }
    CHECK(alt_z == m.complex.euler_characteristic());
    CHECK(alt_2 == m.complex.euler_characteristic());
    // Poincare duality mod 2 on closed manifolds.
    const int n = m.complex.dimension();
    for (int k = 0; k <= n; ++k) CHECK(z2[k].betti == z2[n - k].betti);
  }
}

TEST_CASE("first homology generators, cocycles and voltages") {
  std::vector<MetricComplex> meshes{grid_torus(2, 3), grid_torus(3, 3), rp2_mesh()};
  const auto c = circle_mesh(4, 1.0);
  const auto r = rp2_mesh();
  meshes.push_back(product_complex(c.complex, c.metric, r.complex, r.metric));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (const auto &m : meshes) {
    const auto &x = m.complex;
    const auto h = first_homology(x);
    const auto d1 = x.boundary_matrix(1);
    const auto d2 = x.boundary_matrix(2);
    CHECK(h.rank == homology_groups(x, Ring::Integer)[1].betti);
    for (int i = 0; i < h.rank; ++i) {
      CHECK((d1 * h.cycles[i].values).isZero());
      CHECK((d2.transpose() * h.cocycles[i].values).isZero());
      for (int j = 0; j < h.rank; ++j) CHECK(h.cocycles[i].values.dot(h.cycles[j].values) == (i == j ? 1 : 0));
    }
    for (const auto &t : h.torsion_cycles) CHECK((d1 * t.values).isZero());
    // Boundaries of 2-chains have trivial class.
    IntVector z = IntVector::Zero(static_cast<Eigen::Index>(x.count(2)));
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = coef(rng);
    CHECK(h.classify({1, Ring::Integer, d2 * z}).isZero());
  }
  const auto rp = first_homology(rp2_mesh().complex);
  CHECK(rp.rank == 0);
  CHECK(rp.torsion == std::vector<long long>{2});
  REQUIRE(rp.torsion_cycles.size() == 1);
  CHECK(rp.classify(rp.torsion_cycles[0])(0) == 1);
}

TEST_CASE("mod-2 homology has dual bases") {
  for (const auto &m : {rp2_mesh(), grid_torus(3, 3), simplex_boundary(4)}) {
    for (int k = 0; k <= m.complex.dimension(); ++k) {
      const auto h = mod2_homology(m.complex, k);
      CHECK(h.dim() == static_cast<std::size_t>(homology_groups(m.complex, Ring::Mod2)[k].betti));
      for (std::size_t i = 0; i < h.dim(); ++i)
        for (std::size_t j = 0; j < h.dim(); ++j) CHECK(h.cocycles[i].dot(h.cycles[j]) == (i == j));
    }
  }
}

TEST_CASE("integral codimension-one cycles") {
  const auto t3 = grid_torus(3, 3);
  const auto cycles = integer_cycles(t3.complex, 2);
  CHECK(cycles.size() == 3);
  for (const auto &c : cycles) CHECK((t3.complex.boundary_matrix(2) * c.values).isZero());
}

TEST_CASE("finite covers") {
  const auto rp2 = rp2_mesh();
  SUBCASE("trivial colouring gives disjoint copies") {
    CoverSpec c{FiniteGroup::cyclic(2), std::vector<int>(rp2.complex.count(1), 0)};
    const auto cov = build_cover(rp2.complex, rp2.metric, c);
    CHECK(cov.components == 2);
    CHECK(volume(cov.mesh.complex, cov.mesh.metric) == doctest::Approx(2 * volume(rp2.complex, rp2.metric)).epsilon(1e-12));
  }
  SUBCASE("circle double cover") {
    const auto circ = circle_mesh(5, 5.0);
    CoverSpec c{FiniteGroup::cyclic(2), std::vector<int>(5, 0)};
    c.edge_color[0] = 1;
    const auto cov = build_cover(circ.complex, circ.metric, c);
    CHECK(cov.components == 1);
    CHECK(cov.mesh.complex.count(1) == 10);
    CHECK(cov.mesh.metric.sum() == doctest::Approx(10.0));
  }
  SUBCASE("orientation double cover of RP2 is a sphere") {
    const auto h = mod2_homology(rp2.complex, 1);
    const auto cov = build_cover(rp2.complex, rp2.metric, z2_cover(rp2.complex, h.cocycles));
    CHECK(cov.components == 1);
    const auto g = homology_groups(cov.mesh.complex, Ring::Integer);
    CHECK(g[1].betti == 0);
    CHECK(g[1].torsion.empty());
    CHECK(g[2].betti == 1);
    CHECK(validate(cov.mesh.complex, cov.mesh.metric).orientable);
  }
  SUBCASE("non-flat colouring is rejected") {
    CoverSpec c{FiniteGroup::cyclic(3), std::vector<int>(rp2.complex.count(1), 0)};
    c.edge_color[0] = 1;
    CHECK(first_non_flat_triangle(rp2.complex, c) >= 0);
    CHECK_THROWS_AS(build_cover(rp2.complex, rp2.metric, c), std::invalid_argument);
  }
  SUBCASE("cyclic covers of the torus multiply volume") {
    const auto t = grid_torus(2, 3);
    const auto h = first_homology(t.complex);
    for (int m : {2, 3, 4}) {
      const auto cov = build_cover(t.complex, t.metric, cyclic_cover(t.complex, h.cocycles[0].values, m));
      CHECK(cov.components == 1);
      CHECK(volume(cov.mesh.complex, cov.mesh.metric) == doctest::Approx(m * 9.0).epsilon(1e-12));
    }
  }
  SUBCASE("colouring file round trip") {
    const auto h = mod2_homology(rp2.complex, 1);
    const auto c = z2_cover(rp2.complex, h.cocycles);
    std::stringstream ss;
    write_coloring(ss, rp2.complex, c);
    const auto back = read_coloring(ss, rp2.complex);
    CHECK(back.edge_color == c.edge_color);
  }
}

TEST_CASE("product triangulations") {
  const auto seg = segment_mesh(1, 1.0);
  auto sq = product_complex(seg.complex, seg.metric, seg.complex, seg.metric);
  CHECK(sq.complex.count(2) == 2);
  CHECK(volume(sq.complex, sq.metric) == doctest::Approx(1.0));

  const auto c3 = circle_mesh(3, 3.0);
  auto t = product_complex(c3.complex, c3.metric, c3.complex, c3.metric);
  CHECK(validate(t.complex, t.metric).ok());
  CHECK(volume(t.complex, t.metric) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(homology_groups(t.complex, Ring::Integer)[1].betti == 2);

  const auto circ = circle_mesh(4, 2.5);
  const auto rp2 = rp2_mesh(0.7);
  auto p = product_complex(circ.complex, circ.metric, rp2.complex, rp2.metric);
  CHECK(validate(p.complex, p.metric).ok());
  CHECK(volume(p.complex, p.metric) == doctest::Approx(2.5 * volume(rp2.complex, rp2.metric)).epsilon(1e-9));
  // Kunneth: H_1(S^1 x RP^2) = Z + Z/2.
  const auto g = homology_groups(p.complex, Ring::Integer);
  CHECK(g[1].betti == 1);
  CHECK(g[1].torsion == std::vector<long long>{2});
}

TEST_CASE("pullback metrics") {
  SUBCASE("identity") {
    const auto t = grid_torus(2, 3);
    std::vector<int> id(t.complex.num_vertices());
    std::iota(id.begin(), id.end(), 0);
    const auto pb = pullback_metric(t.complex, id, t.complex, t.metric, 1e-3);
    CHECK(pb.metric.isApprox(t.metric));
    CHECK(pb.repair_factor == 1.0);
  }
  SUBCASE("doubling map of polygons") {
    const auto big = circle_mesh(8, 8.0);
    const auto small = circle_mesh(4, 2.0);
    std::vector<int> f(8);
    for (int i = 0; i < 8; ++i) f[i] = i % 4;
    const auto pb = pullback_metric(big.complex, f, small.complex, small.metric, 1e-3);
    CHECK(pb.metric.sum() == doctest::Approx(2 * small.metric.sum()));
  }
  SUBCASE("grid collapse") {
    const auto fine = grid_torus(2, 6);
    const auto coarse = grid_torus(2, 3);
    const auto f = grid_collapse_map(2, 6, 3);
    CHECK(is_simplicial_map(fine.complex, f, coarse.complex));
    const double eps = 1e-3;
    const auto pb = pullback_metric(fine.complex, f, coarse.complex, coarse.metric, eps);
    CHECK(validate(fine.complex, pb.metric).ok());
    const double ratio = volume(fine.complex, pb.metric) / volume(coarse.complex, coarse.metric);
    CHECK(ratio <= static_cast<double>(fine.complex.count(2)) * std::pow(1 + 10 * eps, 2));
    // Each coarse triangle is covered once by a non-collapsed fine triangle.
    CHECK(ratio >= 1.0 - 1e-12);
  }
  SUBCASE("non-simplicial map is rejected") {
    const auto t = grid_torus(2, 3);
    std::vector<int> f(t.complex.num_vertices());
    std::iota(f.begin(), f.end(), 0);
    f[1] = 5; // (0,0)-(1,0) would map to the non-edge (0,0)-(2,1)
    CHECK_FALSE(is_simplicial_map(t.complex, f, t.complex));
    CHECK_THROWS_AS(pullback_metric(t.complex, f, t.complex, t.metric, 1e-3), std::invalid_argument);
  }
}

TEST_CASE("mesh text format") {
  const auto rp2 = rp2_mesh(0.5);
  std::stringstream ss;
  write_mesh(ss, rp2.complex, rp2.metric);
  const auto back = read_mesh(ss);
  CHECK(back.complex.count(2) == 10);
  CHECK(back.metric.isApprox(rp2.metric));
  std::istringstream missing("dim 1\nvertices 3\nsimplex 0 1\nsimplex 1 2\nsimplex 0 2\nedgelen 0 1 1\n");
  CHECK_THROWS(read_mesh(missing));
  std::istringstream dup("dim 1\nvertices 2\nsimplex 0 1\nedgelen 0 1 1\nedgelen 1 0 1\n");
  CHECK_THROWS(read_mesh(dup));
}
