#include "systolic/homology.hpp"
#include "systolic/smith.hpp"

#include <queue>
#include <stdexcept>

namespace systolic {

namespace {

struct SpanningTree {
  std::vector<int> parent_vertex; // -1 at roots
  std::vector<int> parent_edge;
  std::vector<bool> is_tree_edge;
};

SpanningTree spanning_tree(const SimplicialComplex &x) {
  const int nv = x.num_vertices();
  SpanningTree t{std::vector<int>(nv, -1), std::vector<int>(nv, -1), std::vector<bool>(x.count(1), false)};
  std::vector<std::vector<std::pair<int, int>>> adj(nv);
  for (std::size_t e = 0; e < x.count(1); ++e) {
    const auto &s = x.simplex(1, static_cast<int>(e));
    adj[s[0]].emplace_back(s[1], static_cast<int>(e));
    adj[s[1]].emplace_back(s[0], static_cast<int>(e));
  }
  std::vector<bool> seen(nv, false);
  for (int root = 0; root < nv; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (const auto &[v, e] : adj[u]) {
        if (seen[v]) continue;
        seen[v] = true;
        t.parent_vertex[v] = u;
        t.parent_edge[v] = e;
        t.is_tree_edge[e] = true;
        q.push(v);
      }
    }
  }
  return t;
}

// Adds +-1 along the tree path from v up to its root into `chain`.
void add_root_path(const SimplicialComplex &x, const SpanningTree &t, int v, long long sign, IntVector &chain) {
  while (t.parent_vertex[v] >= 0) {
    const int p = t.parent_vertex[v];
    const int e = t.parent_edge[v];
    // Walking v -> p.
    chain(e) += (v < p ? sign : -sign);
    (void)x;
    v = p;
  }
}

long long positive_mod(long long a, long long m) {
  const long long r = a % m;
  return r < 0 ? r + m : r;
}

} // namespace

FirstHomology first_homology(const SimplicialComplex &x) {
  FirstHomology h;
  const std::size_t ne = x.count(1);
  const auto tree = spanning_tree(x);
  std::vector<int> non_tree;
  std::vector<int> slot(ne, -1);
  for (std::size_t e = 0; e < ne; ++e)
    if (!tree.is_tree_edge[e]) {
      slot[e] = static_cast<int>(non_tree.size());
      non_tree.push_back(static_cast<int>(e));
    }
  const auto nn = static_cast<Eigen::Index>(non_tree.size());
  const auto nt = static_cast<Eigen::Index>(x.count(2));
  IntMatrix relations = IntMatrix::Zero(nn, nt);
  for (Eigen::Index t = 0; t < nt; ++t) {
    const auto f = x.faces(2, static_cast<int>(t));
    for (int j = 0; j < 3; ++j)
      if (slot[f[j]] >= 0) relations(slot[f[j]], t) += (j % 2 == 0) ? 1 : -1;
  }
  const auto snf = smith_normal_form(relations);
  const auto r = static_cast<Eigen::Index>(snf.rank());
  h.rank = static_cast<int>(nn - r);
  std::vector<Eigen::Index> torsion_rows;
  for (Eigen::Index i = 0; i < r; ++i)
    if (snf.diagonal[i] > 1) {
      torsion_rows.push_back(i);
      h.torsion.push_back(snf.diagonal[i]);
    }

  const auto coords = static_cast<Eigen::Index>(h.rank + torsion_rows.size());
  h.edge_voltage = IntMatrix::Zero(coords, static_cast<Eigen::Index>(ne));
  for (Eigen::Index j = 0; j < nn; ++j) {
    for (int i = 0; i < h.rank; ++i) h.edge_voltage(i, non_tree[j]) = snf.left(r + i, j);
    for (std::size_t k = 0; k < torsion_rows.size(); ++k)
      h.edge_voltage(h.rank + k, non_tree[j]) = positive_mod(snf.left(torsion_rows[k], j), h.torsion[k]);
  }

  auto cycle_from = [&](Eigen::Index column) {
    Chain<long long> c{1, Ring::Integer, IntVector::Zero(static_cast<Eigen::Index>(ne))};
    for (Eigen::Index j = 0; j < nn; ++j) {
      const long long m = snf.left_inverse(j, column);
      if (m == 0) continue;
      const auto &s = x.simplex(1, non_tree[j]);
      // Fundamental cycle: s0 -> s1 along the edge, then back through the tree.
      c.values(non_tree[j]) += m;
      add_root_path(x, tree, s[1], m, c.values);
      add_root_path(x, tree, s[0], -m, c.values);
    }
    return c;
  };
  for (int i = 0; i < h.rank; ++i) {
    Cochain<long long> w{1, Ring::Integer, h.edge_voltage.row(i).transpose()};
    h.cocycles.push_back(std::move(w));
    h.cycles.push_back(cycle_from(r + i));
  }
  for (auto row : torsion_rows) h.torsion_cycles.push_back(cycle_from(row));
  return h;
}

IntVector FirstHomology::classify(const Chain<long long> &cycle) const {
  IntVector c = edge_voltage * cycle.values;
  for (std::size_t k = 0; k < torsion.size(); ++k) c(rank + k) = positive_mod(c(rank + k), torsion[k]);
  return c;
}

Gf2Vector Mod2Homology::classify(const Gf2Vector &cycle) const {
  Gf2Vector out(cocycles.size());
  for (std::size_t i = 0; i < cocycles.size(); ++i) out.set(i, cocycles[i].dot(cycle));
  return out;
}

namespace {

std::vector<Gf2Vector> complement_in_quotient(const std::vector<Gf2Vector> &candidates,
                                              const std::vector<Gf2Vector> &subspace, std::size_t dim) {
  Gf2Echelon ech(dim);
  for (const auto &b : subspace) ech.insert(b);
  std::vector<Gf2Vector> out;
  for (const auto &z : candidates)
    if (ech.insert(z)) out.push_back(z);
  return out;
}

} // namespace

Mod2Homology mod2_homology(const SimplicialComplex &x, int k) {
  Mod2Homology h;
  h.degree = k;
  if (k < 0 || k > x.dimension()) return h;
  const std::size_t nk = x.count(k);
  // Boundaries of (k+1)-simplices, as vectors over C_k; they also cut out the cocycles.
  std::vector<Gf2Vector> bounds;
  for (std::size_t i = 0; i < x.count(k + 1); ++i) {
    Gf2Vector b(nk);
    for (int f : x.faces(k + 1, static_cast<int>(i))) b.flip(f);
    bounds.push_back(std::move(b));
  }
  // Coboundaries of (k-1)-simplices are the rows of the degree-k boundary matrix.
  const auto cobounds = k >= 1 ? x.boundary_rows_mod2(k) : std::vector<Gf2Vector>{};

  std::vector<Gf2Vector> cycles_space;
  if (k == 0) {
    for (std::size_t v = 0; v < nk; ++v) {
      Gf2Vector e(nk);
      e.set(v);
      cycles_space.push_back(std::move(e));
    }
  } else {
    cycles_space = gf2_nullspace(cobounds, nk);
  }
  h.cycles = complement_in_quotient(cycles_space, bounds, nk);
  const auto cocycle_space = gf2_nullspace(bounds, nk);
  auto cocycles = complement_in_quotient(cocycle_space, cobounds, nk);
  if (cocycles.size() != h.cycles.size()) throw std::logic_error("mod-2 homology/cohomology dimension mismatch");

  const std::size_t d = h.cycles.size();
  std::vector<Gf2Vector> pairing(d, Gf2Vector(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) pairing[i].set(j, cocycles[i].dot(h.cycles[j]));
  const auto inv = gf2_inverse(pairing);
  if (!inv) throw std::logic_error("degenerate mod-2 pairing");
  h.cocycles.assign(d, Gf2Vector(nk));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j : (*inv)[i].support()) h.cocycles[i] ^= cocycles[j];
  return h;
}

std::vector<HomologyGroup> homology_groups(const SimplicialComplex &x, Ring ring) {
  const int n = x.dimension();
  std::vector<long long> rank(n + 2, 0);
  std::vector<std::vector<long long>> factors(n + 2);
  for (int k = 1; k <= n; ++k) {
    if (ring == Ring::Mod2) {
      rank[k] = static_cast<long long>(gf2_rank(x.boundary_rows_mod2(k)));
    } else {
      const auto snf = smith_normal_form(x.boundary_matrix(k), false);
      rank[k] = snf.rank();
      for (auto d : snf.diagonal)
        if (d > 1) factors[k].push_back(d);
    }
  }
  std::vector<HomologyGroup> groups(n + 1);
  for (int k = 0; k <= n; ++k) {
    groups[k].betti = static_cast<long long>(x.count(k)) - rank[k] - rank[k + 1];
    if (ring == Ring::Integer) groups[k].torsion = factors[k + 1];
  }
  return groups;
}

std::vector<Chain<long long>> integer_cycles(const SimplicialComplex &x, int k) {
  // U d_{k+1} V = D. In y = U c coordinates the boundaries are the multiples
  // of d_i in the first r slots, and the cycles are cut out by d_k U^{-1},
  // whose first r columns vanish.
  const auto snf = smith_normal_form(x.boundary_matrix(k + 1));
  const auto r = static_cast<Eigen::Index>(snf.rank());
  const auto nk = static_cast<Eigen::Index>(x.count(k));
  std::vector<Chain<long long>> out;
  IntMatrix tail = x.boundary_matrix(k) * snf.left_inverse.rightCols(nk - r);
  if (tail.rows() == 0) tail = IntMatrix::Zero(1, nk - r);
  const auto ker = smith_normal_form(IntMatrix(tail.transpose()));
  for (Eigen::Index i = ker.rank(); i < nk - r; ++i) {
    const IntVector y = ker.left.row(i).transpose();
    out.push_back({k, Ring::Integer, snf.left_inverse.rightCols(nk - r) * y});
  }
  for (Eigen::Index i = 0; i < r; ++i)
    if (snf.diagonal[i] > 1) out.push_back({k, Ring::Integer, snf.left_inverse.col(i)});
  return out;
}

HomologyResult homology(const SimplicialComplex &x, Ring ring) {
  if (ring == Ring::Real) ring = Ring::Integer;
  HomologyResult out;
  out.ring = ring;
  out.groups = homology_groups(x, ring);
  const int n = x.dimension();
  auto to_chain = [&](const Gf2Vector &v, int k) {
    Chain<long long> c{k, Ring::Mod2, IntVector::Zero(static_cast<Eigen::Index>(v.size()))};
    for (auto i : v.support()) c.values(static_cast<Eigen::Index>(i)) = 1;
    return c;
  };
  if (ring == Ring::Integer) {
    if (n >= 1) {
      auto h1 = first_homology(x);
      out.h1_cycles = h1.cycles;
      for (auto &c : h1.torsion_cycles) out.h1_cycles.push_back(c);
      out.h1_cocycles = h1.cocycles;
    }
  } else if (n >= 1) {
    const auto h1 = mod2_homology(x, 1);
    for (const auto &c : h1.cycles) out.h1_cycles.push_back(to_chain(c, 1));
    for (const auto &c : h1.cocycles) {
      auto ch = to_chain(c, 1);
      out.h1_cocycles.push_back({1, Ring::Mod2, ch.values});
    }
  }
  if (n >= 2) {
    if (ring == Ring::Mod2) {
      for (const auto &c : mod2_homology(x, n - 1).cycles) out.codim1_cycles.push_back(to_chain(c, n - 1));
    } else {
      out.codim1_cycles = integer_cycles(x, n - 1);
    }
  }
  return out;
}

} // namespace systolic
