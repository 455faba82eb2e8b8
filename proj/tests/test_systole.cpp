#include <doctest.h>

#include "systolic/generators.hpp"
#include "systolic/homology.hpp"
#include "systolic/systole.hpp"

#include <queue>
#include <random>

using namespace systolic;

namespace {

// Shortest distance in the infinite unit Kuhn grid from the origin to a
// nonzero point of m Z^2, by Dijkstra on a finite window. With `mod2`, only
// translates with some odd coordinate count.
double grid_cover_oracle(int m, bool mod2) {
  const int w = 2 * m;
  const int side = 2 * w + 1;
  auto id = [&](int i, int j) { return (i + w) * side + (j + w); };
  std::vector<double> dist(side * side, INFINITY);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[id(0, 0)] = 0;
  pq.push({0, id(0, 0)});
  const int di[6] = {1, -1, 0, 0, 1, -1}, dj[6] = {0, 0, 1, -1, 1, -1};
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    const int i = u / side - w, j = u % side - w;
    for (int k = 0; k < 6; ++k) {
      const int a = i + di[k], b = j + dj[k];
      if (std::abs(a) > w || std::abs(b) > w) continue;
      const double nd = d + (k < 4 ? 1.0 : std::sqrt(2.0));
      if (nd < dist[id(a, b)]) {
        dist[id(a, b)] = nd;
        pq.push({nd, id(a, b)});
      }
    }
  }
  double best = INFINITY;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) {
      if (a == 0 && b == 0) continue;
      if (mod2 && a % 2 == 0 && b % 2 == 0) continue;
      best = std::min(best, dist[id(a * m, b * m)]);
    }
  return best;
}

// Shortest simple cycle of the projective plane's 1-skeleton that is not a
// mod-2 boundary, by enumerating vertex sequences.
double rp2_cycle_oracle(const MetricComplex &m) {
  const auto &x = m.complex;
  const auto bounds = [&] {
    std::vector<Gf2Vector> rows;
    for (std::size_t t = 0; t < x.count(2); ++t) {
      Gf2Vector b(x.count(1));
      for (int f : x.faces(2, static_cast<int>(t))) b.flip(f);
      rows.push_back(b);
    }
    return rows;
  }();
  double best = INFINITY;
  std::vector<int> path{0};
  std::function<void()> extend = [&] {
    const int len = static_cast<int>(path.size());
    if (len >= 3 && x.edge(path.back(), path.front()) >= 0) {
      Gf2Vector c(x.count(1));
      double l = 0;
      for (int i = 0; i < len; ++i) {
        const int e = x.edge(path[i], path[(i + 1) % len]);
        c.flip(e);
        l += m.metric(e);
      }
      if (!gf2_solve_combination(bounds, c)) best = std::min(best, l);
    }
    if (len == 6) return;
    for (int v = 0; v < x.num_vertices(); ++v) {
      if (std::find(path.begin(), path.end(), v) != path.end() || x.edge(path.back(), v) < 0) continue;
      path.push_back(v);
      extend();
      path.pop_back();
    }
  };
  for (int start = 0; start < 6; ++start) {
    path = {start};
    extend();
  }
  return best;
}

void check_witness(const SimplicialComplex &x, const PLMetric &g, const SystoleValue &s) {
  REQUIRE(s.witness);
  CHECK(chain_length(g, *s.witness) == doctest::Approx(s.value).epsilon(1e-9));
  const IntVector bd = x.boundary_matrix(1) * s.witness->values;
  if (s.witness->ring == Ring::Mod2)
    CHECK(bd.unaryExpr([](long long v) { return v % 2; }).isZero());
  else
    CHECK(bd.isZero());
}

} // namespace

TEST_CASE("homology 1-systoles") {
  const auto s2 = simplex_boundary(3);
  CHECK_FALSE(sysh1(s2.complex, s2.metric, Ring::Integer).finite());
  CHECK_FALSE(sysh1(s2.complex, s2.metric, Ring::Mod2).finite());

  const auto rp2 = rp2_mesh();
  const double oracle = rp2_cycle_oracle(rp2);
  CHECK(oracle == doctest::Approx(3.0));
  const auto z2 = sysh1(rp2.complex, rp2.metric, Ring::Mod2);
  CHECK(z2.value == doctest::Approx(oracle));
  check_witness(rp2.complex, rp2.metric, z2);
  const auto h = mod2_homology(rp2.complex, 1);
  Gf2Vector w(rp2.complex.count(1));
  for (Eigen::Index e = 0; e < z2.witness->values.size(); ++e) w.set(e, z2.witness->values(e) % 2 != 0);
  CHECK(h.classify(w).any());
  CHECK(sysh1(rp2.complex, rp2.metric, Ring::Integer).value == doctest::Approx(3.0));

  for (int m : {3, 4, 5}) {
    const auto t = grid_torus(2, m);
    for (Ring ring : {Ring::Integer, Ring::Mod2}) {
      const auto s = sysh1(t.complex, t.metric, ring);
      CHECK(s.value == doctest::Approx(grid_cover_oracle(m, ring == Ring::Mod2)));
      CHECK(s.value == doctest::Approx(m));
      check_witness(t.complex, t.metric, s);
    }
  }
}

TEST_CASE("random metrics: positivity and mod-2 bound") {
  const auto t = grid_torus(2, 4);
  const auto rp2 = rp2_mesh();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = perturbed_metric(t.complex, t.metric, 0.3, seed);
    const auto z = sysh1(t.complex, g, Ring::Integer);
    const auto z2 = sysh1(t.complex, g, Ring::Mod2);
    CHECK(z.value > 0);
    CHECK(z2.value <= z.value + 1e-9);
    check_witness(t.complex, g, z);
    const auto gp = perturbed_metric(rp2.complex, rp2.metric, 0.3, seed);
    CHECK(sysh1(rp2.complex, gp, Ring::Mod2).value > 0);
    // Oracle on the perturbed projective plane as well.
    CHECK(sysh1(rp2.complex, gp, Ring::Mod2).value == doctest::Approx(rp2_cycle_oracle({rp2.complex, gp})));
  }
}

TEST_CASE("homotopy systole surrogate") {
  const auto rp2 = rp2_mesh();
  const auto h = mod2_homology(rp2.complex, 1);
  const auto dbl = z2_cover(rp2.complex, h.cocycles);
  const auto p = pisys1_upper(rp2.complex, rp2.metric, {dbl}, true);
  CHECK(p.value == doctest::Approx(3.0));
  CHECK(p.exactness == Exactness::Exact);
  REQUIRE(p.witness);
  // The witness lifts to an open path in the double cover.
  std::vector<int> walk;
  {
    // Reconstruct a vertex walk from the chain (a simple cycle).
    const auto &x = rp2.complex;
    std::vector<std::vector<int>> nb(x.num_vertices());
    for (Eigen::Index e = 0; e < p.witness->values.size(); ++e)
      if (p.witness->values(e) != 0) {
        const auto &s = x.simplex(1, static_cast<int>(e));
        nb[s[0]].push_back(s[1]);
        nb[s[1]].push_back(s[0]);
      }
    int start = 0;
    while (nb[start].empty()) ++start;
    walk = {start};
    int prev = -1, cur = start;
    do {
      const int next = nb[cur][0] != prev ? nb[cur][0] : nb[cur][1];
      prev = cur;
      cur = next;
      walk.push_back(cur);
    } while (cur != start);
  }
  CHECK(holonomy(rp2.complex, dbl, walk) != dbl.group.identity);

  const auto t = grid_torus(2, 4);
  const auto g = perturbed_metric(t.complex, t.metric, 0.2, 5);
  CHECK(pisys1_upper(t.complex, g, {}).value == doctest::Approx(sysh1(t.complex, g, Ring::Integer).value));
  CHECK(pisys1_upper(t.complex, g, {}).exactness == Exactness::UpperBound);
  const auto s2 = simplex_boundary(3);
  CHECK_FALSE(pisys1_upper(s2.complex, s2.metric, {}).finite());
}

TEST_CASE("stable norm") {
  const int m = 4;
  const auto t = grid_torus(2, m);
  const auto h = first_homology(t.complex);
  CHECK(stable_norm(t.complex, t.metric, h, IntVector::Zero(2)).value == doctest::Approx(0.0));
  const auto e1 = stable_norm(t.complex, t.metric, h, IntVector::Unit(2, 0));
  CHECK(e1.value == doctest::Approx(m));
  CHECK(e1.dual_value == doctest::Approx(e1.value).epsilon(1e-7));
  // The certificate is closed and has comass at most one.
  CHECK((t.complex.boundary_matrix(2).transpose().cast<double>() * e1.cocycle.values).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((e1.cocycle.values.cwiseAbs().array() / t.metric.array()).maxCoeff() <= 1.0 + 1e-12);
  CHECK((t.complex.boundary_matrix(1).cast<double>() * e1.cycle.values).cwiseAbs().maxCoeff() < 1e-9);

  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = perturbed_metric(t.complex, t.metric, 0.3, 100 + trial);
    IntVector a(2);
    a << coef(rng), coef(rng);
    if (a.isZero()) a(0) = 1;
    const auto s1 = stable_norm(t.complex, g, h, a);
    const auto s2 = stable_norm(t.complex, g, h, IntVector(2 * a));
    CHECK(s2.value == doctest::Approx(2 * s1.value).epsilon(1e-9));
    CHECK(s1.dual_value == doctest::Approx(s1.value).epsilon(1e-7));
    // Cycle represents the class.
    for (int i = 0; i < 2; ++i)
      CHECK(h.cocycles[i].values.cast<double>().dot(s1.cycle.values) == doctest::Approx(static_cast<double>(a(i))));
  }
}

TEST_CASE("stable 1-systole") {
  const auto rp2 = rp2_mesh();
  CHECK_FALSE(stsys1(rp2.complex, rp2.metric).finite());
  CHECK(stsys1(grid_torus(2, 4).complex, grid_torus(2, 4).metric).value == doctest::Approx(4.0));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int trial = 0; trial < 6; ++trial) {
    const int b = 2 + trial % 2;
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(b, b);
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j) m(i, j) += u(rng);
    if (std::abs(m.determinant()) < 0.3) continue;
    const LatticeBasis l(m);
    const auto torus = gen_flat_torus(l, 3);
    const auto st = stsys1(torus.mesh.complex, torus.mesh.metric);
    CHECK(st.value == doctest::Approx(lambda1(l)).epsilon(1e-6));
  }
  const auto hex = gen_flat_torus(hexagonal_lattice(), 4, true);
  CHECK(stsys1(hex.mesh.complex, hex.mesh.metric).value ==
        doctest::Approx(lambda1(normalize_covolume(hexagonal_lattice()))).epsilon(1e-6));
}

TEST_CASE("aggregated 1-systole") {
  const auto rp2 = rp2_mesh();
  const auto h = mod2_homology(rp2.complex, 1);
  CHECK(sys1_aggregate(rp2.complex, rp2.metric, {z2_cover(rp2.complex, h.cocycles)}, true).value ==
        doctest::Approx(3.0));
  const auto t = grid_torus(2, 3);
  CHECK(sys1_aggregate(t.complex, t.metric, {}).value == doctest::Approx(3.0));
  const auto s2 = simplex_boundary(3);
  CHECK_FALSE(sys1_aggregate(s2.complex, s2.metric, {}).finite());
}
