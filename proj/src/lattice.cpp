#include "systolic/lattice.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace systolic {

namespace {

void check_nonsingular(const Eigen::MatrixXd &rows) {
  if (rows.rows() == 0 || rows.rows() != rows.cols())
    throw std::invalid_argument("lattice basis must be square and nonempty");
  if (!rows.allFinite()) throw std::invalid_argument("lattice basis has non-finite entries");
  const double scale = rows.rowwise().norm().maxCoeff();
  const double det = std::abs(rows.determinant());
  if (!(scale > 0.0) || det <= 1e-12 * std::pow(scale, static_cast<double>(rows.rows())))
    throw SingularLatticeError("lattice basis is (numerically) singular");
}

} // namespace

LatticeBasis::LatticeBasis(Eigen::MatrixXd rows) : basis_(std::move(rows)) { check_nonsingular(basis_); }

LatticeBasis LatticeBasis::from_gram(const Eigen::MatrixXd &gram) {
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (gram + gram.transpose()));
  if (llt.info() != Eigen::Success) throw SingularLatticeError("Gram matrix is not positive definite");
  // G = L L^T, so the rows of L form a basis with this Gram matrix.
  return LatticeBasis(Eigen::MatrixXd(llt.matrixL()));
}

LatticeBasis dual_lattice(const LatticeBasis &lattice) {
  return LatticeBasis(lattice.rows().transpose().inverse());
}

double lambda1(const LatticeBasis &lattice) { return lambda1_gram(lattice.gram()); }

Eigen::VectorXd shortest_lattice_vector(const LatticeBasis &lattice) {
  const auto sv = shortest_vector(lattice.gram());
  return lattice.rows().transpose() * sv.coefficients.cast<double>();
}

double berge_martinet_product(const LatticeBasis &lattice) {
  return lambda1(lattice) * lambda1(dual_lattice(lattice));
}

double hermite_invariant(const LatticeBasis &lattice) {
  const double l = lambda1(lattice);
  return l * l / std::pow(lattice.covolume(), 2.0 / lattice.rank());
}

LatticeBasis normalize_covolume(const LatticeBasis &lattice) {
  return lattice.scaled(std::pow(lattice.covolume(), -1.0 / lattice.rank()));
}

bool is_isodual(const LatticeBasis &lattice, double tol) {
  const LatticeBasis l = normalize_covolume(lattice);
  const auto red = lll_reduce(l.gram());
  const Eigen::MatrixXd g = red.gram;
  const Eigen::MatrixXd dual = g.inverse();
  const Eigen::MatrixXd dg = 0.5 * (dual + dual.transpose());
  const int b = l.rank();

  // Candidate images of each reduced basis vector: dual vectors of equal norm.
  std::vector<std::vector<Eigen::VectorXd>> candidates(b);
  const double radius = g.diagonal().maxCoeff() * (1.0 + 1e-6) + tol;
  std::vector<Eigen::VectorXd> pool;
  for_each_short_vector(dg, radius, false,
                        [&](const IntVector &x, double) { pool.push_back(x.cast<double>()); });
  for (int i = 0; i < b; ++i)
    for (const auto &v : pool)
      if (std::abs(v.dot(dg * v) - g(i, i)) <= tol * std::max(1.0, g(i, i))) candidates[i].push_back(v);

  std::vector<Eigen::VectorXd> chosen;
  std::function<bool(int)> search = [&](int i) {
    if (i == b) return true;
    for (const auto &v : candidates[i]) {
      bool ok = true;
      for (int j = 0; j < i && ok; ++j)
        ok = std::abs(v.dot(dg * chosen[j]) - g(i, j)) <= tol * std::max(1.0, std::abs(g(i, j)));
      if (!ok) continue;
      chosen.push_back(v);
      if (search(i + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  return search(0);
}

std::optional<double> gamma_prime_table(int b) {
  switch (b) {
  case 1: return 1.0;
  case 2: return 2.0 / std::sqrt(3.0);
  case 3: return std::sqrt(1.5);
  case 4: return std::sqrt(2.0);
  default: return std::nullopt;
  }
}

namespace {

// Upper-triangular factor with positive diagonal, rescaled to determinant one.
void normalize_factor(Eigen::MatrixXd &r) {
  const int b = static_cast<int>(r.rows());
  for (int i = 0; i < b; ++i) {
    r(i, i) = std::abs(r(i, i));
    if (r(i, i) < 1e-6) r(i, i) = 1e-6;
  }
  const double det = r.diagonal().prod();
  r /= std::pow(det, 1.0 / b);
}

double factor_product(const Eigen::MatrixXd &r) {
  const Eigen::MatrixXd g = r.transpose() * r;
  return berge_martinet_gram(g);
}

} // namespace

DualCriticalResult dual_critical_search(int b, long long budget, std::uint64_t seed) {
  if (b < 1 || b > 8) throw std::invalid_argument("dual_critical_search: rank must lie in [1, 8]");
  if (b == 1) return {integer_lattice(1), 1.0, 0, 0};

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.5, 1.5);

  auto random_factor = [&] {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(b, b);
    for (int i = 0; i < b; ++i) {
      r(i, i) = uniform(rng);
      for (int j = i + 1; j < b; ++j) r(i, j) = 0.5 * normal(rng);
    }
    normalize_factor(r);
    return r;
  };

  // Restart lengths are drawn once from the seeded generator; the second
  // half of the budget polishes the best restart.
  const long long total = std::max<long long>(budget, 1);
  const long long polish = total / 2;
  std::vector<long long> schedule;
  {
    long long remaining = total - polish;
    std::uniform_int_distribution<long long> len(std::max<long long>(remaining / 40, 1),
                                                 std::max<long long>(remaining / 15, 1));
    while (remaining > 0) {
      const long long l = std::min(remaining, len(rng));
      schedule.push_back(l);
      remaining -= l;
    }
  }

  auto climb = [&](Eigen::MatrixXd &cur, double &cur_val, double sigma, long long steps, long long &accepted) {
    for (long long it = 0; it < steps; ++it) {
      Eigen::MatrixXd cand = cur;
      for (int i = 0; i < b; ++i)
        for (int j = i; j < b; ++j) cand(i, j) += sigma * normal(rng);
      normalize_factor(cand);
      const double val = factor_product(cand);
      if (val > cur_val) {
        cur = std::move(cand);
        cur_val = val;
        sigma = std::min(sigma * 1.5, 0.5);
        ++accepted;
      } else {
        sigma *= 0.97;
        if (sigma < 1e-9) sigma = 1e-3;
      }
    }
  };

  DualCriticalResult best;
  best.product = -1.0;
  Eigen::MatrixXd best_factor;
  for (const long long steps : schedule) {
    Eigen::MatrixXd cur = random_factor();
    double cur_val = factor_product(cur);
    climb(cur, cur_val, 0.2, steps, best.accepted_moves);
    ++best.restarts;
    if (cur_val > best.product) {
      best.product = cur_val;
      best_factor = cur;
    }
  }
  climb(best_factor, best.product, 1e-2, polish, best.accepted_moves);
  best.lattice = LatticeBasis(Eigen::MatrixXd(best_factor.transpose()));
  best.product = berge_martinet_product(best.lattice);
  return best;
}

LatticeBasis integer_lattice(int b) { return LatticeBasis(Eigen::MatrixXd::Identity(b, b)); }

LatticeBasis hexagonal_lattice() {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 0.0, 0.5, std::sqrt(3.0) / 2.0;
  return LatticeBasis(m);
}

LatticeBasis fcc_lattice() {
  Eigen::MatrixXd m(3, 3);
  m << 1, 1, 0, 1, 0, 1, 0, 1, 1;
  return LatticeBasis(m);
}

LatticeBasis read_lattice(std::istream &in) {
  std::string line;
  int b = -1;
  std::vector<double> values;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    if (b < 0) {
      std::string key;
      if (!(ls >> key)) continue;
      if (key != "lattice" || !(ls >> b) || b < 1) throw std::runtime_error("expected 'lattice b' header");
      continue;
    }
    double v;
    while (ls >> v) values.push_back(v);
    if (!ls.eof()) throw std::runtime_error("malformed lattice row: " + line);
  }
  if (b < 0) throw std::runtime_error("missing 'lattice b' header");
  if (values.size() != static_cast<std::size_t>(b) * b)
    throw std::runtime_error("lattice file must contain b rows of b numbers");
  Eigen::MatrixXd m(b, b);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) m(i, j) = values[static_cast<std::size_t>(i) * b + j];
  return LatticeBasis(m);
}

void write_lattice(std::ostream &out, const LatticeBasis &lattice) {
  out << "lattice " << lattice.rank() << '\n';
  out.precision(17);
  for (int i = 0; i < lattice.rank(); ++i) {
    for (int j = 0; j < lattice.rank(); ++j) out << (j ? " " : "") << lattice.rows()(i, j);
    out << '\n';
  }
}

} // namespace systolic
