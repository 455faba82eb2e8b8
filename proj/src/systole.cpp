#include "systolic/systole.hpp"
#include "systolic/lp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace systolic {

const char *to_string(Exactness e) {
  switch (e) {
  case Exactness::Exact: return "exact";
  case Exactness::UpperBound: return "upper-bound";
  case Exactness::LowerBound: return "lower-bound";
  }
  return "?";
}

Exactness weakest(Exactness a, Exactness b) {
  if (a == Exactness::Exact) return b;
  if (b == Exactness::Exact) return a;
  return a == b ? a : Exactness::UpperBound;
}

double chain_length(const PLMetric &g, const Chain<long long> &c) {
  return (c.values.cast<double>().cwiseAbs().array() * g.array()).sum();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Abelian voltages in Z^r (+) Z/m_1 (+) ...; modulus 0 marks a free slot.
struct AbelianVoltage {
  std::vector<long long> moduli;
  IntMatrix edge; // coordinates x E, lower -> higher vertex

  using Element = std::vector<long long>;
  Element identity() const { return Element(moduli.size(), 0); }
  Element along(int e, bool forward) const {
    Element out(moduli.size());
    for (std::size_t i = 0; i < moduli.size(); ++i) out[i] = reduce(i, forward ? edge(i, e) : -edge(i, e));
    return out;
  }
  Element mul(const Element &a, const Element &b) const {
    Element out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = reduce(i, a[i] + b[i]);
    return out;
  }
  Element inv(const Element &a) const {
    Element out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = reduce(i, -a[i]);
    return out;
  }
  bool trivial(const Element &a) const {
    return std::all_of(a.begin(), a.end(), [](long long v) { return v == 0; });
  }
  long long reduce(std::size_t i, long long v) const {
    if (moduli[i] == 0) return v;
    const long long r = v % moduli[i];
    return r < 0 ? r + moduli[i] : r;
  }
};

struct GroupVoltage {
  const FiniteGroup *group;
  const std::vector<int> *color;

  using Element = int;
  Element identity() const { return group->identity; }
  Element along(int e, bool forward) const { return forward ? (*color)[e] : group->inverse((*color)[e]); }
  Element mul(Element a, Element b) const { return group->mul(a, b); }
  Element inv(Element a) const { return group->inverse(a); }
  bool trivial(Element a) const { return a == group->identity; }
};

struct Loop {
  double length = kInf;
  std::vector<int> walk; // closed vertex sequence, first == last
};

struct Adjacency {
  std::vector<std::vector<std::pair<int, int>>> out; // (neighbour, edge)
};

Adjacency adjacency(const SimplicialComplex &x) {
  Adjacency a{std::vector<std::vector<std::pair<int, int>>>(x.num_vertices())};
  for (std::size_t e = 0; e < x.count(1); ++e) {
    const auto &s = x.simplex(1, static_cast<int>(e));
    a.out[s[0]].emplace_back(s[1], static_cast<int>(e));
    a.out[s[1]].emplace_back(s[0], static_cast<int>(e));
  }
  return a;
}

// Shortest closed walk with nontrivial voltage. A shortest such loop through
// a root v is one non-tree edge closed up by two shortest-path-tree paths
// from v, so one Dijkstra per root suffices.
template <typename Voltage> Loop shortest_nontrivial_loop(const SimplicialComplex &x, const PLMetric &g, const Voltage &volt) {
  const int nv = x.num_vertices();
  const auto adj = adjacency(x);
  Loop best;
  using Element = typename Voltage::Element;
  std::vector<double> dist(nv);
  std::vector<int> parent(nv), parent_edge(nv);
  std::vector<Element> hol(nv);
  for (int root = 0; root < nv; ++root) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), -1);
    dist[root] = 0.0;
    hol[root] = volt.identity();
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, root});
    std::vector<int> settled;
    std::vector<bool> done(nv, false);
    while (!pq.empty()) {
      const auto [d, u] = pq.top();
      pq.pop();
      if (done[u]) continue;
      if (d >= best.length) break;
      done[u] = true;
      settled.push_back(u);
      for (const auto &[v, e] : adj.out[u]) {
        const double nd = d + g(e);
        if (nd < dist[v]) {
          dist[v] = nd;
          parent[v] = u;
          parent_edge[v] = e;
          pq.push({nd, v});
        }
      }
    }
    for (int u : settled)
      if (u != root) hol[u] = volt.mul(hol[parent[u]], volt.along(parent_edge[u], parent[u] < u));
    for (int a : settled)
      for (const auto &[b, e] : adj.out[a]) {
        if (a > b && done[b]) continue; // each edge once when both ends are settled
        if (!done[b]) continue;
        const double len = dist[a] + g(e) + dist[b];
        if (len >= best.length) continue;
        const Element h = volt.mul(volt.mul(hol[a], volt.along(e, a < b)), volt.inv(hol[b]));
        if (volt.trivial(h)) continue;
        best.length = len;
        std::vector<int> up;
        for (int w = a; w != -1; w = parent[w]) up.push_back(w);
        best.walk.assign(up.rbegin(), up.rend());
        for (int w = b; w != -1; w = parent[w]) best.walk.push_back(w);
      }
  }
  return best;
}

Chain<long long> walk_chain(const SimplicialComplex &x, const std::vector<int> &walk, Ring ring) {
  Chain<long long> c{1, ring, IntVector::Zero(static_cast<Eigen::Index>(x.count(1)))};
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    const int u = walk[i], v = walk[i + 1];
    c.values(x.edge(u, v)) += u < v ? 1 : -1;
  }
  if (ring == Ring::Mod2)
    for (Eigen::Index e = 0; e < c.values.size(); ++e) c.values(e) = std::abs(c.values(e)) % 2;
  return c;
}

AbelianVoltage integral_voltage(const FirstHomology &h) {
  AbelianVoltage v;
  v.moduli.assign(h.rank, 0);
  for (auto t : h.torsion) v.moduli.push_back(t);
  v.edge = h.edge_voltage;
  return v;
}

AbelianVoltage mod2_voltage(const SimplicialComplex &x, const Mod2Homology &h) {
  AbelianVoltage v;
  v.moduli.assign(h.dim(), 2);
  v.edge = IntMatrix::Zero(static_cast<Eigen::Index>(h.dim()), static_cast<Eigen::Index>(x.count(1)));
  for (std::size_t i = 0; i < h.dim(); ++i)
    for (auto e : h.cocycles[i].support()) v.edge(i, e) = 1;
  return v;
}

} // namespace

SystoleValue sysh1(const SimplicialComplex &x, const PLMetric &g, Ring ring) {
  SystoleValue out;
  AbelianVoltage volt;
  if (ring == Ring::Mod2) {
    volt = mod2_voltage(x, mod2_homology(x, 1));
    out.provenance = "shortest edge loop nonzero in H_1(X; Z/2)";
  } else {
    volt = integral_voltage(first_homology(x));
    ring = Ring::Integer;
    out.provenance = "shortest edge loop nonzero in H_1(X; Z)";
  }
  if (volt.moduli.empty()) {
    out.provenance += "; H_1 = 0, empty infimum";
    return out;
  }
  const auto loop = shortest_nontrivial_loop(x, g, volt);
  if (loop.walk.empty()) return out;
  out.value = loop.length;
  out.witness = walk_chain(x, loop.walk, ring);
  return out;
}

int holonomy(const SimplicialComplex &x, const CoverSpec &c, const std::vector<int> &walk) {
  int h = c.group.identity;
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    const int u = walk[i], v = walk[i + 1];
    const int col = c.edge_color.at(x.edge(u, v));
    h = c.group.mul(h, u < v ? col : c.group.inverse(col));
  }
  return h;
}

SystoleValue pisys1_upper(const SimplicialComplex &x, const PLMetric &g, const std::vector<CoverSpec> &covers,
                          bool complete) {
  SystoleValue out;
  std::ostringstream prov;
  prov << "shortest loop with non-closed lift; covers: H_1";
  Loop best = shortest_nontrivial_loop(x, g, integral_voltage(first_homology(x)));
  for (std::size_t i = 0; i < covers.size(); ++i) {
    if (first_non_flat_triangle(x, covers[i]) >= 0) throw std::invalid_argument("cover colouring is not flat");
    prov << ", #" << i << " (order " << covers[i].group.order() << ")";
    GroupVoltage volt{&covers[i].group, &covers[i].edge_color};
    const auto loop = shortest_nontrivial_loop(x, g, volt);
    if (loop.length < best.length) best = loop;
  }
  out.exactness = complete ? Exactness::Exact : Exactness::UpperBound;
  if (complete) prov << "; covers asserted complete";
  out.provenance = prov.str();
  if (!best.walk.empty()) {
    out.value = best.length;
    out.witness = walk_chain(x, best.walk, Ring::Integer);
  }
  return out;
}

StableNormValue stable_norm(const SimplicialComplex &x, const PLMetric &g, const FirstHomology &h, const IntVector &cls) {
  if (cls.size() != h.rank) throw std::invalid_argument("class has wrong number of coordinates");
  const auto ne = static_cast<Eigen::Index>(x.count(1));
  const Eigen::Index nv = x.num_vertices();
  const Eigen::Index r = h.rank;
  // Variables: c = p - q; rows: vertex balance, then pairings with the cocycle basis.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nv + r, 2 * ne);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nv + r);
  Eigen::VectorXd cost(2 * ne);
  for (Eigen::Index e = 0; e < ne; ++e) {
    const auto &s = x.simplex(1, static_cast<int>(e));
    a(s[1], e) += 1.0;
    a(s[0], e) -= 1.0;
    a(s[1], ne + e) -= 1.0;
    a(s[0], ne + e) += 1.0;
    for (Eigen::Index i = 0; i < r; ++i) {
      const double w = static_cast<double>(h.cocycles[i].values(e));
      a(nv + i, e) = w;
      a(nv + i, ne + e) = -w;
    }
    cost(e) = cost(ne + e) = g(e);
  }
  for (Eigen::Index i = 0; i < r; ++i) b(nv + i) = static_cast<double>(cls(i));
  const auto lp = solve_lp(a, b, cost);
  if (lp.status != LpStatus::Optimal) throw std::runtime_error("stable norm linear program did not reach optimality");

  StableNormValue out;
  out.cls = cls;
  out.cycle = {1, Ring::Real, lp.x.head(ne) - lp.x.tail(ne)};
  out.value = (out.cycle.values.cwiseAbs().array() * g.array()).sum();
  // w_e = y(v) - y(u) + sum_i y_i w_i(e); LP dual feasibility gives |w_e| <= l_e.
  Eigen::VectorXd w(ne);
  for (Eigen::Index e = 0; e < ne; ++e) {
    const auto &s = x.simplex(1, static_cast<int>(e));
    double v = lp.y(s[1]) - lp.y(s[0]);
    for (Eigen::Index i = 0; i < r; ++i) v += lp.y(nv + i) * static_cast<double>(h.cocycles[i].values(e));
    w(e) = v;
  }
  // Rescale away round-off so the certificate is feasible.
  const double excess = (w.cwiseAbs().array() / g.array()).maxCoeff();
  const double shrink = excess > 1.0 ? 1.0 / excess : 1.0;
  out.cocycle = {1, Ring::Real, shrink * w};
  out.cocycle_class = shrink * lp.y.tail(r);
  out.dual_value = out.cocycle_class.dot(cls.cast<double>());
  return out;
}

StableNormValue stable_norm(const SimplicialComplex &x, const PLMetric &g, const IntVector &cls) {
  return stable_norm(x, g, first_homology(x), cls);
}

StableSystole stsys1_detailed(const SimplicialComplex &x, const PLMetric &g) {
  StableSystole out;
  out.systole.provenance = "minimum stable norm over nonzero free classes, certified by comass duals";
  const auto h = first_homology(x);
  const int r = h.rank;
  if (r == 0) {
    out.systole.provenance += "; b1 = 0, empty infimum";
    return out;
  }
  std::map<std::vector<long long>, double> seen;
  std::vector<Eigen::VectorXd> certs;
  double best = kInf;
  auto evaluate = [&](const IntVector &cls) {
    std::vector<long long> key(cls.data(), cls.data() + cls.size());
    if (seen.count(key)) return;
    const auto sn = stable_norm(x, g, h, cls);
    seen[key] = sn.value;
    ++out.classes_evaluated;
    certs.push_back(sn.cocycle_class);
    if (sn.value < best) {
      best = sn.value;
      out.cls = cls;
      out.cycle = sn.cycle;
    }
  };
  for (int i = 0; i < r; ++i) evaluate(IntVector::Unit(r, i));

  bool changed = true;
  while (changed) {
    changed = false;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(r, r);
    for (const auto &y : certs) q += y * y.transpose();
    q /= static_cast<double>(certs.size());
    if (Eigen::LLT<Eigen::MatrixXd>(q).info() != Eigen::Success ||
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q).eigenvalues().minCoeff() <= 1e-12 * q.trace()) {
      // Add certificates from sums of basis classes until the bound is definite.
      for (int i = 0; i < r && !changed; ++i)
        for (int j = i + 1; j < r && !changed; ++j) {
          const std::size_t before = certs.size();
          evaluate(IntVector::Unit(r, i) + IntVector::Unit(r, j));
          evaluate(IntVector::Unit(r, i) - IntVector::Unit(r, j));
          changed = certs.size() > before;
        }
      if (!changed) throw std::runtime_error("stsys1: dual certificates do not bound the class search");
      continue;
    }
    // Every class with ||a|| <= best satisfies a^T Q a <= best^2.
    std::vector<IntVector> candidates;
    const double radius2 = best * best * (1.0 + 1e-9);
    for_each_short_vector(q, radius2, true, [&](const IntVector &c, double) {
      if (candidates.size() > 200000) throw std::runtime_error("stsys1: class search radius too large");
      candidates.push_back(c);
    });
    for (const auto &c : candidates) {
      std::vector<long long> key(c.data(), c.data() + c.size());
      if (seen.count(key)) continue;
      double lb = 0.0;
      for (const auto &y : certs) lb = std::max(lb, std::abs(y.dot(c.cast<double>())));
      if (lb >= best * (1.0 - 1e-12)) continue;
      const std::size_t before = certs.size();
      evaluate(c);
      changed = changed || certs.size() > before;
    }
  }
  out.systole.value = best;
  // Integral witness when the LP optimum happens to be integral.
  IntVector rounded = out.cycle.values.array().round().cast<long long>();
  if ((rounded.cast<double>() - out.cycle.values).cwiseAbs().maxCoeff() < 1e-9)
    out.systole.witness = Chain<long long>{1, Ring::Integer, rounded};
  return out;
}

SystoleValue stsys1(const SimplicialComplex &x, const PLMetric &g) { return stsys1_detailed(x, g).systole; }

SystoleValue sys1_aggregate(const SimplicialComplex &x, const PLMetric &g, const std::vector<CoverSpec> &covers,
                            bool complete) {
  const auto pi = pisys1_upper(x, g, covers, complete);
  const auto st = stsys1(x, g);
  SystoleValue out = pi.value <= st.value ? pi : st;
  out.exactness = weakest(pi.exactness, st.exactness);
  out.provenance = "min(pisys1: " + pi.provenance + "; stsys1: " + st.provenance + ")";
  return out;
}

} // namespace systolic
