#include "systolic/z2_hypersurface.hpp"

#include "maxflow.hpp"
#include "systolic/geometry.hpp"
#include "systolic/homology.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>

namespace systolic {

DualGraph dual_graph(const SimplicialComplex &x, const PLMetric &g) {
  const int n = x.dimension();
  if (n < 1) throw std::invalid_argument("dual graph needs dimension >= 1");
  DualGraph d;
  d.nodes = static_cast<int>(x.count(n));
  d.weight.resize(static_cast<Eigen::Index>(x.count(n - 1)));
  for (std::size_t f = 0; f < x.count(n - 1); ++f) {
    const auto &co = x.cofaces(n - 1, static_cast<int>(f));
    if (co.size() != 2) throw std::invalid_argument("complex is not a closed pseudomanifold");
    d.arcs.push_back({co[0], co[1]});
    d.facet.push_back(static_cast<int>(f));
    d.weight(static_cast<Eigen::Index>(f)) =
        n - 1 == 0 ? 1.0 : simplex_volume(squared_distances(x, g, n - 1, static_cast<int>(f)));
  }
  return d;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Incidence {
  std::vector<std::vector<int>> arcs_at; // node -> incident arcs
};

Incidence incidence(const DualGraph &d) {
  Incidence inc;
  inc.arcs_at.resize(d.nodes);
  for (std::size_t a = 0; a < d.arcs.size(); ++a) {
    inc.arcs_at[d.arcs[a][0]].push_back(static_cast<int>(a));
    inc.arcs_at[d.arcs[a][1]].push_back(static_cast<int>(a));
  }
  return inc;
}

bool bad(const DualGraph &d, const Gf2Vector &z, const std::vector<char> &label, std::size_t a) {
  return z.get(a) ^ label[d.arcs[a][0]] ^ label[d.arcs[a][1]];
}

double cost(const DualGraph &d, const Gf2Vector &z, const std::vector<char> &label) {
  double c = 0.0;
  for (std::size_t a = 0; a < d.arcs.size(); ++a)
    if (bad(d, z, label, a)) c += d.weight(static_cast<Eigen::Index>(a));
  return c;
}

Gf2Vector facets_of(const DualGraph &d, const Gf2Vector &z, const std::vector<char> &label) {
  Gf2Vector out(d.arcs.size());
  for (std::size_t a = 0; a < d.arcs.size(); ++a)
    if (bad(d, z, label, a)) out.set(static_cast<std::size_t>(d.facet[a]));
  return out;
}

// Greedy single-node flips until no flip lowers the cost.
void local_search(const DualGraph &d, const Incidence &inc, const Gf2Vector &z, std::vector<char> &label) {
  bool improved = true;
  while (improved) {
    improved = false;
    for (int u = 0; u < d.nodes; ++u) {
      double delta = 0.0;
      for (int a : inc.arcs_at[u]) delta += bad(d, z, label, a) ? -d.weight(a) : d.weight(a);
      if (delta < -1e-12) {
        label[u] ^= 1;
        improved = true;
      }
    }
  }
}

// Lifted problem on the double cover determined by z. Labels fixed so far are
// tied to the terminals; the minimum cut halves to a lower bound and, when its
// source side picks exactly one lift of every node, to an optimal labeling.
struct CutBound {
  double lower = 0.0;
  std::vector<signed char> rounded; // -1 where the cut does not decide
  bool decisive = false;
};

CutBound cut_bound(const DualGraph &d, const Gf2Vector &z, const std::vector<signed char> &fixed, double scale) {
  const int s = 2 * d.nodes, t = s + 1;
  detail::MaxFlow mf(2 * d.nodes + 2);
  for (std::size_t a = 0; a < d.arcs.size(); ++a) {
    const int u = d.arcs[a][0], v = d.arcs[a][1];
    const int zb = z.get(a) ? 1 : 0;
    const double w = d.weight(static_cast<Eigen::Index>(a));
    mf.add_edge(2 * u, 2 * v + zb, w, w);
    mf.add_edge(2 * u + 1, 2 * v + (1 - zb), w, w);
  }
  const double big = 4.0 * scale + 1.0;
  for (int u = 0; u < d.nodes; ++u) {
    if (fixed[u] < 0) continue;
    mf.add_edge(s, 2 * u + fixed[u], big, 0.0);
    mf.add_edge(2 * u + 1 - fixed[u], t, big, 0.0);
  }
  CutBound out;
  out.lower = 0.5 * mf.run(s, t, 1e-14 * scale);
  const auto side = mf.source_side(s);
  out.rounded.assign(d.nodes, -1);
  out.decisive = true;
  for (int u = 0; u < d.nodes; ++u) {
    const bool a = side[2 * u], b = side[2 * u + 1];
    if (a != b) out.rounded[u] = a ? 0 : 1;
    else out.decisive = false;
  }
  return out;
}

class BranchAndBound {
public:
  BranchAndBound(const DualGraph &d, const Gf2Vector &z, double incumbent, std::vector<char> best, Clock::time_point deadline)
      : d_(d), z_(z), scale_(d.weight.sum()), upper_(incumbent), best_(std::move(best)), deadline_(deadline) {}

  void run(Z2ClassResult &r) {
    std::vector<signed char> fixed(d_.nodes, -1);
    fixed[0] = 0; // complementing every label leaves the facet set unchanged
    const CutBound root = cut_bound(d_, z_, fixed, scale_);
    r.lower = root.lower;
    explore(fixed, root);
    r.nodes_explored = explored_;
    r.timed_out = timed_out_;
    // Search exhausted: nothing below the incumbent exists.
    if (!timed_out_) r.lower = std::max(r.lower, upper_);
  }

  double upper() const { return upper_; }
  bool improved() const { return own_; }
  const std::vector<char> &best() const { return best_; }

private:
  void accept(const std::vector<char> &label) {
    const double c = cost(d_, z_, label);
    if (c < upper_) {
      upper_ = c;
      best_ = label;
      own_ = true;
    }
  }

  bool prune(double lower) const { return lower >= upper_ - 1e-12 * std::max(1.0, upper_); }

  void explore(std::vector<signed char> &fixed, const CutBound &b) {
    ++explored_;
    if (Clock::now() > deadline_) {
      timed_out_ = true;
      return;
    }
    if (prune(b.lower)) return;
    if (b.decisive) {
      accept(std::vector<char>(b.rounded.begin(), b.rounded.end()));
      return;
    }
    std::vector<char> guess(d_.nodes);
    int branch = -1;
    for (int u = 0; u < d_.nodes; ++u) {
      guess[u] = b.rounded[u] >= 0 ? b.rounded[u] : 0;
      if (b.rounded[u] < 0 && fixed[u] < 0 && branch < 0) branch = u;
    }
    accept(guess);
    if (branch < 0) return;
    CutBound child[2];
    for (int v = 0; v < 2; ++v) {
      fixed[branch] = static_cast<signed char>(v);
      child[v] = cut_bound(d_, z_, fixed, scale_);
    }
    const int first = child[1].lower < child[0].lower ? 1 : 0;
    for (int v : {first, 1 - first}) {
      if (timed_out_) break;
      fixed[branch] = static_cast<signed char>(v);
      explore(fixed, child[v]);
    }
    fixed[branch] = -1;
  }

  const DualGraph &d_;
  const Gf2Vector &z_;
  double scale_;
  double upper_;
  std::vector<char> best_;
  Clock::time_point deadline_;
  bool own_ = false;
  bool timed_out_ = false;
  long long explored_ = 0;
};

std::vector<char> heuristic_labels(const DualGraph &d, const Incidence &inc, const Gf2Vector &z, const Z2Options &o,
                                   double &best_cost) {
  std::mt19937_64 rng(o.seed);
  std::vector<char> best(d.nodes, 0);
  local_search(d, inc, z, best);
  best_cost = cost(d, z, best);
  const double scale = d.weight.sum();
  std::uniform_int_distribution<int> pick(0, std::max(d.nodes - 1, 0));
  std::bernoulli_distribution coin(0.5);
  for (int r = 0; r < o.restarts; ++r) {
    std::vector<char> label(d.nodes);
    if (r % 2 == 0) {
      // Round the double-cover cut rooted at a random node.
      std::vector<signed char> fixed(d.nodes, -1);
      fixed[pick(rng)] = 0;
      const auto b = cut_bound(d, z, fixed, scale);
      for (int u = 0; u < d.nodes; ++u) label[u] = b.rounded[u] >= 0 ? b.rounded[u] : coin(rng);
    } else {
      for (auto &l : label) l = coin(rng);
    }
    local_search(d, inc, z, label);
    const double c = cost(d, z, label);
    if (c < best_cost) {
      best_cost = c;
      best = std::move(label);
    }
  }
  return best;
}

Gf2Vector representative(const Mod2Homology &h, std::size_t mask, std::size_t size) {
  Gf2Vector z(size);
  for (std::size_t i = 0; i < h.dim(); ++i)
    if ((mask >> i) & 1u) z ^= h.cycles[i];
  return z;
}

Gf2Vector mask_vector(std::size_t mask, std::size_t dim) {
  Gf2Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i)
    if ((mask >> i) & 1u) v.set(i);
  return v;
}

// Re-index a facet-indexed representative by dual arc.
Gf2Vector by_arc(const DualGraph &d, const Gf2Vector &z) {
  Gf2Vector out(d.arcs.size());
  for (std::size_t a = 0; a < d.arcs.size(); ++a)
    if (z.get(static_cast<std::size_t>(d.facet[a]))) out.set(a);
  return out;
}

Chain<long long> facet_chain(int degree, const Gf2Vector &facets) {
  Chain<long long> c{degree, Ring::Mod2, Eigen::Matrix<long long, Eigen::Dynamic, 1>::Zero(facets.size())};
  for (auto i : facets.support()) c.values(static_cast<Eigen::Index>(i)) = 1;
  return c;
}

} // namespace

Z2ClassResult solve_class(const DualGraph &d, const Gf2Vector &rep, const Z2Options &o, double incumbent) {
  const Gf2Vector z = by_arc(d, rep);
  const Incidence inc = incidence(d);
  Z2ClassResult r;
  double hcost = 0.0;
  auto labels = heuristic_labels(d, inc, z, o, hcost);
  r.upper = hcost;
  r.witness = facets_of(d, z, labels);
  if (o.mode == Z2Mode::Heuristic) {
    r.lower = 0.0;
    return r;
  }
  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(o.timeout_seconds));
  const double start = std::min(hcost, incumbent);
  BranchAndBound bb(d, z, start, labels, deadline);
  bb.run(r);
  if (bb.improved()) {
    r.upper = bb.upper();
    r.witness = facets_of(d, z, bb.best());
  }
  if (!r.timed_out) {
    if (r.upper <= incumbent) {
      r.optimal = true;
      r.lower = r.upper;
    } else {
      r.pruned = true;
      r.optimal = false;
    }
  }
  return r;
}

Z2Result sys_codim1_z2(const SimplicialComplex &x, const PLMetric &g, const Z2Options &o) {
  const int n = x.dimension();
  if (n != 2 && n != 3) throw std::invalid_argument("codimension-1 Z/2 systole needs n in {2, 3}");
  if (!is_closed_pseudomanifold(x)) throw std::invalid_argument("complex is not a closed pseudomanifold");
  Z2Result out;
  if (n == 2 && o.delegate_surfaces) {
    out.systole = sysh1(x, g, Ring::Mod2);
    out.systole.provenance = "surface: " + out.systole.provenance;
    out.lower_bound = out.systole.value;
    return out;
  }
  const auto h = mod2_homology(x, n - 1);
  if (h.dim() == 0) {
    out.systole.provenance = "H_{n-1}(X; Z/2) = 0, empty infimum";
    out.lower_bound = out.systole.value;
    return out;
  }
  if (h.dim() > 16) throw std::invalid_argument("too many Z/2 classes to enumerate");
  const DualGraph d = dual_graph(x, g);
  const std::size_t nclasses = (std::size_t{1} << h.dim()) - 1;
  const std::size_t facets = x.count(n - 1);

  // Heuristic pass over every class gives a shared incumbent for pruning.
  Z2Options heur = o;
  heur.mode = Z2Mode::Heuristic;
  std::vector<Z2ClassResult> first(nclasses);
  double incumbent = std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m <= nclasses; ++m) {
    heur.seed = o.seed + m;
    first[m - 1] = solve_class(d, representative(h, m, facets), heur);
    incumbent = std::min(incumbent, first[m - 1].upper);
  }

  if (o.mode == Z2Mode::Exact) {
    auto task = [&](std::size_t m) {
      Z2Options local = o;
      local.seed = o.seed + m;
      return solve_class(d, representative(h, m, facets), local, incumbent);
    };
    const int threads = std::max(1, o.threads);
    for (std::size_t base = 1; base <= nclasses; base += static_cast<std::size_t>(threads)) {
      std::vector<std::future<Z2ClassResult>> jobs;
      for (std::size_t m = base; m < base + static_cast<std::size_t>(threads) && m <= nclasses; ++m)
        jobs.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred, task, m));
      for (std::size_t j = 0; j < jobs.size(); ++j) first[base + j - 1] = jobs[j].get();
    }
  }

  out.lower_bound = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  for (std::size_t m = 1; m <= nclasses; ++m) {
    auto &r = first[m - 1];
    r.cls = mask_vector(m, h.dim());
    out.timed_out = out.timed_out || r.timed_out;
    out.lower_bound = std::min(out.lower_bound, r.lower);
    if (r.upper < first[best].upper) best = m - 1;
  }
  const auto &winner = first[best];
  out.systole.value = winner.upper;
  out.systole.witness = facet_chain(n - 1, winner.witness);
  const bool exact = o.mode == Z2Mode::Exact && !out.timed_out;
  out.systole.exactness = exact ? Exactness::Exact : Exactness::UpperBound;
  std::ostringstream prov;
  prov << "minimum facet cycle over " << nclasses << " nonzero Z/2 classes ("
       << (o.mode == Z2Mode::Exact ? "branch and bound" : "flip heuristic") << ")";
  if (out.timed_out) prov << "; timed out, lower bound " << out.lower_bound;
  out.systole.provenance = prov.str();
  if (exact) out.lower_bound = out.systole.value;
  out.classes = std::move(first);
  return out;
}

WitnessVerdict witness_verify(const SimplicialComplex &x, const Gf2Vector &cycle) {
  const int k = x.dimension() - 1;
  WitnessVerdict v;
  if (k < 0 || cycle.size() != x.count(k)) throw std::invalid_argument("chain is not supported on codimension-1 simplices");
  v.is_cycle = true;
  if (k > 0)
    for (const auto &row : x.boundary_rows_mod2(k))
      if (row.dot(cycle)) {
        v.is_cycle = false;
        break;
      }
  if (!v.is_cycle) return v;
  v.class_coordinates = mod2_homology(x, k).classify(cycle);
  v.nontrivial = v.class_coordinates.any();
  return v;
}

SystoleValue sysk_aggregate(const SimplicialComplex &x, const PLMetric &g, int k, const std::vector<CoverSpec> &covers,
                            const Z2Options &options) {
  if (k == 1) return sys1_aggregate(x, g, covers);
  if (k != x.dimension() - 1) throw std::invalid_argument("aggregated systole supported for k = 1 and k = n - 1 only");
  SystoleValue best = sys_codim1_z2(x, g, options).systole;
  best.provenance = "trivial cover: " + best.provenance;
  for (std::size_t i = 0; i < covers.size(); ++i) {
    const auto cover = build_cover(x, g, covers[i]);
    auto v = sys_codim1_z2(cover.mesh.complex, cover.mesh.metric, options).systole;
    if (v.value < best.value) {
      best = v;
      best.witness.reset();
      best.provenance = "cover #" + std::to_string(i) + ": " + v.provenance;
    }
  }
  // Only finitely many covers are inspected.
  best.exactness = Exactness::UpperBound;
  return best;
}

} // namespace systolic
