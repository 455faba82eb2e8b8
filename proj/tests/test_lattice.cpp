#include <doctest.h>

#include "systolic/lattice.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace systolic;

namespace {

// Exhaustive minimum over integer coefficients in [-k, k]^b.
double brute_lambda1(const LatticeBasis &l, int k) {
  const int b = l.rank();
  Eigen::VectorXi c = Eigen::VectorXi::Constant(b, -k);
  double best = INFINITY;
  while (true) {
    if (!c.isZero()) best = std::min(best, (l.rows().transpose() * c.cast<double>()).norm());
    int i = 0;
    while (i < b && c(i) == k) c(i++) = -k;
    if (i == b) break;
    ++c(i);
  }
  return best;
}

LatticeBasis random_lattice(std::mt19937_64 &rng, int b) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    Eigen::MatrixXd m(b, b);
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j) m(i, j) = u(rng);
    if (std::abs(m.determinant()) < 0.2) continue;
    // LLL-reduce so that a modest coefficient box is exhaustive.
    const LatticeBasis raw(m);
    const auto red = lll_reduce(raw.gram());
    return LatticeBasis(red.transform.cast<double>() * m);
  }
}

} // namespace

TEST_CASE("dual lattice pairs integrally and inverts") {
  SUBCASE("integer lattice is self-dual") {
    CHECK(dual_lattice(integer_lattice(3)).rows().isApprox(Eigen::MatrixXd::Identity(3, 3)));
  }
  SUBCASE("fcc dual has lambda1 sqrt(3)/2") {
    const auto d = dual_lattice(fcc_lattice());
    CHECK((d.rows() * fcc_lattice().rows().transpose()).isApprox(Eigen::MatrixXd::Identity(3, 3)));
    // Oracle: brute force over [-4,4]^3 of the dual basis.
    CHECK(brute_lambda1(d, 4) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
    CHECK(lambda1(d) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  }
  SUBCASE("scaling inverts on the dual") {
    const auto d = dual_lattice(fcc_lattice().scaled(3.0));
    CHECK(d.rows().isApprox(dual_lattice(fcc_lattice()).rows() / 3.0));
  }
  SUBCASE("double dual is the original basis") {
    CHECK(dual_lattice(dual_lattice(hexagonal_lattice())).rows().isApprox(hexagonal_lattice().rows()));
  }
  CHECK_THROWS_AS(LatticeBasis(Eigen::MatrixXd::Zero(2, 2)), SingularLatticeError);
}

TEST_CASE("lambda1 matches known values") {
  CHECK(lambda1(integer_lattice(3)) == doctest::Approx(1.0));
  CHECK(lambda1(fcc_lattice()) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(brute_lambda1(fcc_lattice(), 3) == doctest::Approx(std::sqrt(2.0)));
  CHECK(lambda1(hexagonal_lattice()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(brute_lambda1(hexagonal_lattice(), 3) == doctest::Approx(1.0));
}

TEST_CASE("lambda1 agrees with brute force on random reduced lattices") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int b = 2 + trial % 3;
    const auto l = random_lattice(rng, b);
    CHECK(lambda1(l) == doctest::Approx(brute_lambda1(l, 5)).epsilon(1e-12));
  }
}

TEST_CASE("Berge-Martinet and Hermite invariants") {
  CHECK(berge_martinet_product(integer_lattice(4)) == doctest::Approx(1.0));
  CHECK(berge_martinet_product(fcc_lattice()) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
  CHECK(berge_martinet_product(hexagonal_lattice()) == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(hermite_invariant(integer_lattice(3)) == doctest::Approx(1.0));
  CHECK(hermite_invariant(fcc_lattice()) == doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
  CHECK(hermite_invariant(hexagonal_lattice()) == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("invariants are scale- and duality-invariant") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto l = random_lattice(rng, 2 + trial % 3);
    const double p = berge_martinet_product(l);
    const double h = hermite_invariant(l);
    CHECK(berge_martinet_product(dual_lattice(l)) == doctest::Approx(p).epsilon(1e-9));
    for (double c : {0.1, 3.0, 17.0}) {
      CHECK(berge_martinet_product(l.scaled(c)) == doctest::Approx(p).epsilon(1e-9));
      CHECK(hermite_invariant(l.scaled(c)) == doctest::Approx(h).epsilon(1e-9));
    }
    const auto ceiling = gamma_prime_table(l.rank());
    REQUIRE(ceiling);
    CHECK(p <= *ceiling + 1e-9);
  }
}

TEST_CASE("short vector enumeration visits each pair once") {
  int count = 0;
  for_each_short_vector(fcc_lattice().gram(), 2.0 + 1e-9, true, [&](const IntVector &, double n2) {
    CHECK(n2 == doctest::Approx(2.0));
    ++count;
  });
  CHECK(count == 6); // 12 minimal vectors of the fcc lattice
}

TEST_CASE("isoduality") {
  CHECK(is_isodual(integer_lattice(2)));
  CHECK(is_isodual(hexagonal_lattice()));
  CHECK_FALSE(is_isodual(fcc_lattice()));
}

TEST_CASE("dual-critical search") {
  CHECK(dual_critical_search(1, 10, 3).product == doctest::Approx(1.0));
  const auto r2 = dual_critical_search(2, 20000, 1);
  CHECK(r2.product >= 2.0 / std::sqrt(3.0) - 1e-3);
  CHECK(r2.product <= 2.0 / std::sqrt(3.0) + 1e-9);
  CHECK(r2.lattice.covolume() == doctest::Approx(1.0));
  const auto again = dual_critical_search(2, 20000, 1);
  CHECK(again.product == r2.product);
  CHECK_THROWS_AS(dual_critical_search(9, 10, 1), std::invalid_argument);
}

TEST_CASE("lattice text round trip") {
  std::stringstream ss;
  write_lattice(ss, fcc_lattice());
  const auto back = read_lattice(ss);
  CHECK(back.rows().isApprox(fcc_lattice().rows()));
  std::istringstream bad("lattice 2\n1 0\n");
  CHECK_THROWS(read_lattice(bad));
}
