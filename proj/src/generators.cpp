#include "systolic/generators.hpp"
#include "systolic/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace systolic {

namespace {

MetricComplex with_uniform_lengths(SimplicialComplex x, double edge) {
  PLMetric g = PLMetric::Constant(x.count(1), edge);
  return {std::move(x), std::move(g)};
}

} // namespace

MetricComplex circle_mesh(int k, double length) {
  if (k < 3) throw std::invalid_argument("circle needs at least 3 edges");
  std::vector<Simplex> edges;
  for (int i = 0; i < k; ++i) edges.push_back({i, (i + 1) % k});
  return with_uniform_lengths(SimplicialComplex(k, edges), length / k);
}

MetricComplex segment_mesh(int k, double length) {
  if (k < 1) throw std::invalid_argument("segment needs at least one edge");
  std::vector<Simplex> edges;
  for (int i = 0; i < k; ++i) edges.push_back({i, i + 1});
  return with_uniform_lengths(SimplicialComplex(k + 1, edges), length / k);
}

MetricComplex simplex_boundary(int n, double edge) {
  if (n < 1) throw std::invalid_argument("simplex boundary needs n >= 1");
  std::vector<Simplex> facets;
  for (int skip = 0; skip <= n; ++skip) {
    Simplex s;
    for (int v = 0; v <= n; ++v)
      if (v != skip) s.push_back(v);
    facets.push_back(s);
  }
  return with_uniform_lengths(SimplicialComplex(n + 1, facets), edge);
}

MetricComplex rp2_mesh(double edge) {
  const std::vector<Simplex> t{{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
                               {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}};
  return with_uniform_lengths(SimplicialComplex(6, t), edge);
}

double rp2_unit_area_edge() { return 1.0 / std::sqrt(10.0 * std::sqrt(3.0) / 4.0); }

MetricComplex unit_cube_mesh() {
  // Vertex id = x + 2y + 4z; one tetrahedron per coordinate ordering.
  std::vector<int> perm{0, 1, 2};
  std::vector<Simplex> tets;
  do {
    Simplex s{0};
    int v = 0;
    for (int axis : perm) s.push_back(v |= 1 << axis);
    tets.push_back(s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  SimplicialComplex x(8, tets);
  PLMetric g(x.count(1));
  for (std::size_t e = 0; e < x.count(1); ++e) {
    const auto &s = x.simplex(1, static_cast<int>(e));
    g(e) = std::sqrt(static_cast<double>(__builtin_popcount(s[0] ^ s[1])));
  }
  return {std::move(x), std::move(g)};
}

MetricComplex kuhn_torus(const LatticeBasis &lattice, int s) {
  const int b = lattice.rank();
  if (s < 3) throw std::invalid_argument("Kuhn torus needs s >= 3 subdivisions to be simplicial");
  int nv = 1;
  for (int i = 0; i < b; ++i) nv *= s;
  auto id = [&](const std::vector<int> &p) {
    int v = 0;
    for (int i = b - 1; i >= 0; --i) v = v * s + ((p[i] % s) + s) % s;
    return v;
  };
  std::vector<Simplex> simplices;
  std::map<std::pair<int, int>, double> lengths;
  std::vector<int> perm(b);
  std::vector<int> p(b, 0);
  for (int base = 0; base < nv; ++base) {
    for (int i = 0, r = base; i < b; ++i, r /= s) p[i] = r % s;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      // Vertices p + e_perm[0] + ... + e_perm[j-1]; 0/1 offsets along the chain.
      std::vector<std::vector<int>> offsets(b + 1, std::vector<int>(b, 0));
      for (int j = 1; j <= b; ++j) {
        offsets[j] = offsets[j - 1];
        offsets[j][perm[j - 1]] = 1;
      }
      Simplex simplex;
      std::vector<int> ids;
      for (const auto &o : offsets) {
        std::vector<int> q(b);
        for (int i = 0; i < b; ++i) q[i] = p[i] + o[i];
        ids.push_back(id(q));
      }
      for (int a = 0; a <= b; ++a)
        for (int c = a + 1; c <= b; ++c) {
          Eigen::VectorXd d = Eigen::VectorXd::Zero(b);
          for (int i = 0; i < b; ++i) d += static_cast<double>(offsets[c][i] - offsets[a][i]) * lattice.rows().row(i).transpose();
          lengths[{std::min(ids[a], ids[c]), std::max(ids[a], ids[c])}] = d.norm() / s;
        }
      simplices.push_back(ids);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  SimplicialComplex x(nv, simplices);
  PLMetric g(x.count(1));
  for (std::size_t e = 0; e < x.count(1); ++e) {
    const auto &sv = x.simplex(1, static_cast<int>(e));
    g(e) = lengths.at({sv[0], sv[1]});
  }
  return {std::move(x), std::move(g)};
}

MetricComplex grid_torus(int n, int m) {
  return kuhn_torus(LatticeBasis(static_cast<double>(m) * Eigen::MatrixXd::Identity(n, n)), m);
}

namespace {

// Kuhn edge directions sum_{i in S} b_i and hyperplane normals b_i*, b_i* - b_j*.
double max_kuhn_edge(const Eigen::MatrixXd &basis) {
  const int b = static_cast<int>(basis.rows());
  double worst = 0.0;
  for (int mask = 1; mask < (1 << b); ++mask) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(b);
    for (int i = 0; i < b; ++i)
      if (mask & (1 << i)) v += basis.row(i).transpose();
    worst = std::max(worst, v.norm());
  }
  return worst;
}

double min_kuhn_edge(const Eigen::MatrixXd &basis) {
  const int b = static_cast<int>(basis.rows());
  double best = INFINITY;
  for (int mask = 1; mask < (1 << b); ++mask) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(b);
    for (int i = 0; i < b; ++i)
      if (mask & (1 << i)) v += basis.row(i).transpose();
    best = std::min(best, v.norm());
  }
  return best;
}

double min_kuhn_normal(const Eigen::MatrixXd &basis) {
  const Eigen::MatrixXd dual = basis.transpose().inverse();
  const int b = static_cast<int>(basis.rows());
  double best = INFINITY;
  for (int i = 0; i < b; ++i) {
    best = std::min(best, dual.row(i).norm());
    for (int j = i + 1; j < b; ++j) best = std::min(best, (dual.row(i) - dual.row(j)).norm());
  }
  return best;
}

} // namespace

FlatTorus gen_flat_torus(const LatticeBasis &lattice, int s, bool normalize) {
  const int b = lattice.rank();
  if (b < 2 || b > 3) throw std::invalid_argument("gen_flat_torus supports rank 2 and 3");
  const LatticeBasis l = normalize ? normalize_covolume(lattice) : lattice;
  const double lam = lambda1(l);
  const double lam_dual = lambda1(dual_lattice(l));
  const auto red = lll_reduce(l.gram());
  const Eigen::MatrixXd reduced = red.transform.cast<double>() * l.rows();

  // Candidate basis vectors: one of each +-pair up to a modest radius.
  const double radius2 = 1.5 * red.gram.diagonal().maxCoeff() + 1e-9;
  std::vector<IntVector> cands;
  for_each_short_vector(red.gram, radius2, true, [&](const IntVector &x, double) { cands.push_back(x); });

  Eigen::MatrixXd best = reduced;
  double best_score = INFINITY;
  int best_rank = -1;
  const double tol = 1e-9;
  auto consider = [&](const Eigen::MatrixXd &m) {
    const int rank = (std::abs(min_kuhn_edge(m) - lam) <= tol * lam ? 1 : 0) +
                     (std::abs(min_kuhn_normal(m) - lam_dual) <= tol * lam_dual ? 1 : 0);
    const double score = max_kuhn_edge(m);
    if (rank > best_rank || (rank == best_rank && score < best_score - 1e-12)) {
      best_rank = rank;
      best_score = score;
      best = m;
    }
  };
  const int nc = static_cast<int>(cands.size());
  std::vector<int> idx(b);
  std::function<void(int, int)> choose = [&](int pos, int from) {
    if (pos == b) {
      IntMatrix c(b, b);
      for (int i = 0; i < b; ++i) c.row(i) = cands[idx[i]].transpose();
      if (std::llround(std::abs(c.cast<double>().determinant())) != 1) return;
      // Overall sign is irrelevant; flip the others.
      for (int signs = 0; signs < (1 << (b - 1)); ++signs) {
        IntMatrix cs = c;
        for (int i = 1; i < b; ++i)
          if (signs & (1 << (i - 1))) cs.row(i) *= -1;
        consider(cs.cast<double>() * reduced);
      }
      return;
    }
    for (int i = from; i < nc; ++i) {
      idx[pos] = i;
      choose(pos + 1, i + 1);
    }
  };
  choose(0, 0);
  FlatTorus out{kuhn_torus(LatticeBasis(best), s), LatticeBasis(best)};
  return out;
}

PLMetric perturbed_metric(const SimplicialComplex &x, const PLMetric &g, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> factor(1.0 - amplitude, 1.0 + amplitude);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    PLMetric out = g;
    for (Eigen::Index e = 0; e < out.size(); ++e) out(e) *= factor(rng);
    if (validate(x, out).metric_valid) return out;
  }
  throw std::runtime_error("could not draw a nondegenerate perturbed metric");
}

std::vector<int> grid_collapse_map(int n, int m_fine, int m_coarse) {
  if (m_coarse < 1 || m_fine % m_coarse != 0) throw std::invalid_argument("fine grid size must be a multiple of the coarse one");
  const int k = m_fine / m_coarse;
  int nv = 1;
  for (int i = 0; i < n; ++i) nv *= m_fine;
  std::vector<int> f(nv);
  for (int v = 0; v < nv; ++v) {
    int img = 0, scale = 1;
    for (int i = 0, r = v; i < n; ++i, r /= m_fine) {
      img += (r % m_fine) / k * scale;
      scale *= m_coarse;
    }
    f[v] = img;
  }
  return f;
}

} // namespace systolic
