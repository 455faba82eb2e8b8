#include <doctest.h>

#include "systolic/constructions.hpp"
#include "systolic/generators.hpp"
#include "systolic/hodge.hpp"
#include "systolic/z2_hypersurface.hpp"

#include <chrono>

using namespace systolic;

namespace {

double total_area(const MetricComplex &m) { return volume(m.complex, m.metric); }

void check_witness(const SimplicialComplex &x, const PLMetric &g, const Z2Result &r) {
  REQUIRE(r.systole.witness);
  const auto &w = *r.systole.witness;
  Gf2Vector facets(w.values.size());
  double weight = 0.0;
  const auto d = dual_graph(x, g);
  for (Eigen::Index i = 0; i < w.values.size(); ++i)
    if (w.values(i)) {
      facets.set(static_cast<std::size_t>(i));
      weight += d.weight(i);
    }
  const auto v = witness_verify(x, facets);
  CHECK(v.is_cycle);
  CHECK(v.nontrivial);
  CHECK(weight == doctest::Approx(r.systole.value).epsilon(1e-9));
}

} // namespace

TEST_CASE("dual graph") {
  const auto t = grid_torus(2, 3);
  const auto d = dual_graph(t.complex, t.metric);
  CHECK(d.nodes == 18);
  CHECK(d.arcs.size() == 27);
  CHECK(d.weight.minCoeff() > 0.0);
  SimplicialComplex ball(4, {{0, 1, 2, 3}});
  PLMetric g = PLMetric::Ones(6);
  CHECK_THROWS_AS(dual_graph(ball, g), std::invalid_argument);
  CHECK_THROWS_AS(sys_codim1_z2(ball, g), std::invalid_argument);
}

TEST_CASE("witness verification") {
  const auto t = grid_torus(3, 3);
  const int k = 2;
  SUBCASE("empty chain") {
    const auto v = witness_verify(t.complex, Gf2Vector(t.complex.count(k)));
    CHECK(v.is_cycle);
    CHECK_FALSE(v.nontrivial);
  }
  SUBCASE("boundary of a tetrahedron") {
    Gf2Vector c(t.complex.count(k));
    for (int f : t.complex.faces(3, 0)) c.set(static_cast<std::size_t>(f));
    const auto v = witness_verify(t.complex, c);
    CHECK(v.is_cycle);
    CHECK_FALSE(v.nontrivial);
  }
  SUBCASE("coordinate slice") {
    // Triangles with every vertex on the plane x = 0 (vertex id = x + 3y + 9z).
    Gf2Vector c(t.complex.count(k));
    for (std::size_t i = 0; i < t.complex.count(k); ++i) {
      const auto &s = t.complex.simplex(k, static_cast<int>(i));
      if (std::all_of(s.begin(), s.end(), [](int v) { return v % 3 == 0; })) c.set(i);
    }
    CHECK(c.count() == 18);
    const auto v = witness_verify(t.complex, c);
    CHECK(v.is_cycle);
    CHECK(v.nontrivial);
    CHECK(v.class_coordinates.count() >= 1);
    // Oracle: the slice pairs with the mod-2 class of the coordinate loop along x.
    Gf2Vector loop(t.complex.count(1));
    for (int i = 0; i < 3; ++i) loop.set(static_cast<std::size_t>(t.complex.edge(i, (i + 1) % 3)));
    const auto h1 = mod2_homology(t.complex, 1);
    const auto h2 = mod2_homology(t.complex, 2);
    CHECK(h1.classify(loop).any());
    CHECK(h2.classify(c) == v.class_coordinates);
  }
  SUBCASE("non-cycle") {
    Gf2Vector c(t.complex.count(k));
    c.set(0);
    CHECK_FALSE(witness_verify(t.complex, c).is_cycle);
  }
}

TEST_CASE("empty infimum on spheres") {
  const auto s3 = simplex_boundary(4);
  const auto r = sys_codim1_z2(s3.complex, s3.metric);
  CHECK_FALSE(r.systole.finite());
  CHECK(r.classes.empty());
  const auto s2 = simplex_boundary(3);
  CHECK_FALSE(sys_codim1_z2(s2.complex, s2.metric).systole.finite());
}

TEST_CASE("surfaces: labeling solver agrees with shortest loops") {
  Z2Options o;
  o.delegate_surfaces = false;
  std::vector<MetricComplex> meshes{grid_torus(2, 3), grid_torus(2, 4), rp2_mesh(1.0)};
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto t = grid_torus(2, 4);
    meshes.push_back({t.complex, perturbed_metric(t.complex, t.metric, 0.3, seed)});
    const auto p = rp2_mesh(1.0);
    meshes.push_back({p.complex, perturbed_metric(p.complex, p.metric, 0.3, 100 + seed)});
  }
  for (const auto &m : meshes) {
    const auto loops = sysh1(m.complex, m.metric, Ring::Mod2);
    const auto cut = sys_codim1_z2(m.complex, m.metric, o);
    CHECK(cut.systole.exactness == Exactness::Exact);
    CHECK(cut.systole.value == doctest::Approx(loops.value).epsilon(1e-12));
    CHECK(sys_codim1_z2(m.complex, m.metric).systole.value == loops.value);
    check_witness(m.complex, m.metric, cut);
  }
}

TEST_CASE("grid 3-torus") {
  const int m = 3;
  const auto t = grid_torus(3, m);
  const auto exact = sys_codim1_z2(t.complex, t.metric);
  CHECK(exact.systole.exactness == Exactness::Exact);
  CHECK(exact.systole.value == doctest::Approx(m * m).epsilon(1e-12));
  CHECK(exact.classes.size() == 7);
  check_witness(t.complex, t.metric, exact);

  Z2Options h;
  h.mode = Z2Mode::Heuristic;
  const auto heur = sys_codim1_z2(t.complex, t.metric, h);
  CHECK(heur.systole.exactness == Exactness::UpperBound);
  CHECK(heur.systole.value >= exact.systole.value - 1e-12);
  for (std::size_t i = 0; i < exact.classes.size(); ++i)
    CHECK(heur.classes[i].upper >= exact.classes[i].lower - 1e-12);

  // Sweep of the coordinate circle map bounds the exact value from above.
  const auto p = period_gram(t.complex, t.metric);
  const auto f = circle_map(t.complex, t.metric, class_cocycle(p.basis, shortest_class(p)));
  const auto s = sweep(t.complex, t.metric, f, 500);
  CHECK(exact.systole.value <= s.min_volume + 1e-9);
}

TEST_CASE("perturbed 3-torus: heuristic never beats exact") {
  const auto t = grid_torus(3, 3);
  for (std::uint64_t seed = 0; seed < 2; ++seed) {
    const auto g = perturbed_metric(t.complex, t.metric, 0.05, seed);
    const auto exact = sys_codim1_z2(t.complex, g);
    Z2Options h;
    h.mode = Z2Mode::Heuristic;
    h.seed = seed;
    const auto heur = sys_codim1_z2(t.complex, g, h);
    CHECK(exact.systole.exactness == Exactness::Exact);
    CHECK(exact.systole.value > 0.0);
    CHECK(heur.systole.value >= exact.systole.value - 1e-12);
    check_witness(t.complex, g, exact);
  }
}

TEST_CASE("circle times projective plane") {
  const auto c = circle_mesh(3, 3.0);
  const auto p = rp2_mesh(1.0);
  const auto prod = product_complex(c.complex, c.metric, p.complex, p.metric);
  const auto r = sys_codim1_z2(prod.complex, prod.metric);
  CHECK(r.systole.exactness == Exactness::Exact);
  CHECK(r.classes.size() == 3);
  // A fibre {point} x RP^2 is the cheapest nonzero class.
  CHECK(r.systole.value == doctest::Approx(total_area(p)).epsilon(1e-9));
  check_witness(prod.complex, prod.metric, r);
}

TEST_CASE("timeouts report a bound pair") {
  const auto t = grid_torus(3, 3);
  const auto g = perturbed_metric(t.complex, t.metric, 0.05, 7);
  Z2Options o;
  o.timeout_seconds = 0.0;
  const auto r = sys_codim1_z2(t.complex, g, o);
  if (r.timed_out) {
    CHECK(r.systole.exactness == Exactness::UpperBound);
    CHECK(r.lower_bound <= r.systole.value + 1e-12);
  }
  const auto full = sys_codim1_z2(t.complex, g);
  CHECK(r.lower_bound <= full.systole.value + 1e-12);
  CHECK(r.systole.value >= full.systole.value - 1e-12);
}

TEST_CASE("aggregated systoles") {
  const auto t = grid_torus(2, 4);
  const auto base = sysk_aggregate(t.complex, t.metric, 1, {});
  CHECK(base.value == doctest::Approx(4.0));
  const auto t3 = grid_torus(3, 3);
  const auto agg = sysk_aggregate(t3.complex, t3.metric, 2, {});
  CHECK(agg.value == doctest::Approx(9.0));
  CHECK(agg.exactness == Exactness::UpperBound);
  CHECK_THROWS_AS(sysk_aggregate(t3.complex, t3.metric, 0, {}), std::invalid_argument);
}
