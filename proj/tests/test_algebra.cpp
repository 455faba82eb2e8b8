#include <doctest.h>

#include "systolic/gf2.hpp"
#include "systolic/smith.hpp"

#include <random>

using namespace systolic;

namespace {

Gf2Vector bits(std::initializer_list<int> v) {
  Gf2Vector out(v.size());
  std::size_t i = 0;
  for (int b : v) out.set(i++, b != 0);
  return out;
}

// Rank over Q via Gaussian elimination in doubles; fine for the small
// well-conditioned integer matrices used here.
long long rational_rank(const IntMatrix &a) {
  return Eigen::FullPivLU<Eigen::MatrixXd>(a.cast<double>()).rank();
}

// Product of the invariant factors equals the gcd of the maximal minors;
// for square full-rank matrices that is |det|.
long long abs_det(const IntMatrix &a) { return std::llround(std::abs(a.cast<double>().determinant())); }

} // namespace

TEST_CASE("gf2 vector basics") {
  auto a = bits({1, 0, 1, 1});
  auto b = bits({0, 1, 1, 0});
  CHECK((a ^ b) == bits({1, 1, 0, 1}));
  CHECK(a.count() == 3);
  CHECK(a.dot(b) == true);
  CHECK(b.lowest() == 1);
  CHECK(Gf2Vector(70).lowest() == 70);
  Gf2Vector big(130);
  big.set(129);
  CHECK(big.support() == std::vector<std::size_t>{129});
}

TEST_CASE("gf2 rank, nullspace and solve") {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = 1 + trial % 7, cols = 2 + trial % 9;
    std::vector<Gf2Vector> m(rows, Gf2Vector(cols));
    for (auto &r : m)
      for (std::size_t j = 0; j < cols; ++j) r.set(j, coin(rng));
    const auto rank = gf2_rank(m);
    const auto ns = gf2_nullspace(m, cols);
    CHECK(rank + ns.size() == cols);
    for (const auto &x : ns)
      for (const auto &r : m) CHECK_FALSE(r.dot(x));
    CHECK(gf2_rank(ns) == ns.size());

    // A combination of the rows is always solvable and reproduces the target.
    Gf2Vector target(cols), pick(rows);
    for (std::size_t i = 0; i < rows; ++i)
      if (coin(rng)) {
        target ^= m[i];
        pick.set(i);
      }
    const auto sol = gf2_solve_combination(m, target);
    REQUIRE(sol);
    Gf2Vector back(cols);
    for (std::size_t i = 0; i < rows; ++i)
      if (sol->get(i)) back ^= m[i];
    CHECK(back == target);
  }
  std::vector<Gf2Vector> m{bits({1, 1, 0}), bits({0, 1, 1})};
  CHECK_FALSE(gf2_solve_combination(m, bits({1, 0, 0})));
}

TEST_CASE("smith normal form of known matrices") {
  IntMatrix a(2, 2);
  a << 2, 4, 6, 8;
  auto s = smith_normal_form(a);
  CHECK(s.diagonal == std::vector<long long>{2, 4});

  // Boundary of the 6-vertex projective plane has torsion Z/2 in degree 1;
  // a compact stand-in: [[2]] padded with zeros.
  IntMatrix t = IntMatrix::Zero(3, 2);
  t(1, 0) = 2;
  t(2, 1) = 3;
  CHECK(smith_normal_form(t).diagonal == std::vector<long long>{1, 6});
}

TEST_CASE("smith normal form on random integer matrices") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> entry(-4, 4);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 1 + trial % 5, n = 1 + (trial / 5) % 5;
    IntMatrix a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = entry(rng);
    const auto s = smith_normal_form(a);
    CHECK(s.rank() == rational_rank(a));
    for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i) {
      CHECK(s.diagonal[i] > 0);
      CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
    }
    CHECK((s.left * s.left_inverse).isIdentity());
    // U A has zero rows beyond the rank; its nonzero rows span the same
    // lattice as D times the column transform.
    const IntMatrix ua = s.left * a;
    for (int i = static_cast<int>(s.rank()); i < m; ++i) CHECK(ua.row(i).isZero());
    if (m == n && s.rank() == m) {
      long long prod = 1;
      for (auto d : s.diagonal) prod *= d;
      CHECK(prod == abs_det(a));
    }
  }
}
