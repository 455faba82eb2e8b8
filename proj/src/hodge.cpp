#include "systolic/hodge.hpp"
#include "systolic/geometry.hpp"
#include "systolic/lattice.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace systolic {

namespace {

// Local frame of a top simplex: vertex coordinates with v0 at the origin.
struct Frame {
  double volume = 0.0;
  Eigen::MatrixXd coords;   // (n+1) x n
  Eigen::MatrixXd edge_inv; // inverse of the edge-vector matrix (rows v_i - v_0)
};

std::vector<Frame> frames(const SimplicialComplex &x, const PLMetric &g) {
  const int n = x.dimension();
  std::vector<Frame> out(x.count(n));
  for (std::size_t s = 0; s < out.size(); ++s) {
    const auto d2 = squared_distances(x, g, n, static_cast<int>(s));
    out[s].volume = simplex_volume(d2);
    out[s].coords = simplex_embedding(d2);
    out[s].edge_inv = out[s].coords.bottomRows(n).inverse();
  }
  return out;
}

// Values of the cochain along v0 -> v_i for the top simplex s.
Eigen::VectorXd local_values(const SimplicialComplex &x, const Eigen::VectorXd &theta, int s) {
  const int n = x.dimension();
  const auto &sv = x.simplex(n, s);
  Eigen::VectorXd a(n);
  for (int i = 1; i <= n; ++i) a(i - 1) = theta(x.edge(sv[0], sv[i])); // sv[0] < sv[i]
  return a;
}

double closedness(const SimplicialComplex &x, const Eigen::VectorXd &theta) {
  double worst = 0.0;
  for (std::size_t t = 0; t < x.count(2); ++t) {
    const auto f = x.faces(2, static_cast<int>(t));
    // Faces omit vertex 0, 1, 2: edges (1,2), (0,2), (0,1).
    worst = std::max(worst, std::abs(theta(f[0]) - theta(f[1]) + theta(f[2])));
  }
  return worst;
}

} // namespace

OneForm make_one_form(const SimplicialComplex &x, const PLMetric &g, const Eigen::VectorXd &values) {
  if (static_cast<std::size_t>(values.size()) != x.count(1)) throw std::invalid_argument("1-cochain has wrong size");
  OneForm out;
  out.values = values;
  out.closedness_residual = closedness(x, values);
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  if (out.closedness_residual > 1e-10 * scale) throw std::invalid_argument("1-cochain is not closed");
  const auto fr = frames(x, g);
  out.covectors.resize(fr.size());
  for (std::size_t s = 0; s < fr.size(); ++s)
    out.covectors[s] = fr[s].edge_inv * local_values(x, values, static_cast<int>(s));
  return out;
}

double l2_inner(const SimplicialComplex &x, const PLMetric &g, const OneForm &a, const OneForm &b) {
  const int n = x.dimension();
  double sum = 0.0;
  for (std::size_t s = 0; s < a.covectors.size(); ++s)
    sum += simplex_volume(x, g, n, static_cast<int>(s)) * a.covectors[s].dot(b.covectors[s]);
  return sum;
}

double l2_norm(const SimplicialComplex &x, const PLMetric &g, const OneForm &theta) {
  return std::sqrt(std::max(0.0, l2_inner(x, g, theta, theta)));
}

double comass(const OneForm &theta) {
  double m = 0.0;
  for (const auto &c : theta.covectors) m = std::max(m, c.norm());
  return m;
}

double coarea_integral(const SimplicialComplex &x, const PLMetric &g, const OneForm &theta) {
  const int n = x.dimension();
  double sum = 0.0;
  for (std::size_t s = 0; s < theta.covectors.size(); ++s)
    sum += simplex_volume(x, g, n, static_cast<int>(s)) * theta.covectors[s].norm();
  return sum;
}

HarmonicResult harmonic_representative(const SimplicialComplex &x, const PLMetric &g, const Eigen::VectorXd &omega) {
  if (!is_connected(x)) throw std::invalid_argument("harmonic representative needs a connected complex");
  const OneForm w = make_one_form(x, g, omega);
  const int n = x.dimension();
  const int nv = x.num_vertices();
  const auto fr = frames(x, g);

  // Energy sum_s vol |E^{-1}(a_s - D u_s)|^2 with D = [-1 | I].
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv);
  for (std::size_t s = 0; s < fr.size(); ++s) {
    const auto &sv = x.simplex(n, static_cast<int>(s));
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n + 1);
    d.col(0).setConstant(-1.0);
    d.rightCols(n).setIdentity();
    const Eigen::MatrixXd b = fr[s].edge_inv * d; // gradient of vertex values
    const Eigen::MatrixXd k = fr[s].volume * b.transpose() * b;
    const Eigen::VectorXd f = fr[s].volume * b.transpose() * w.covectors[s];
    for (int i = 0; i <= n; ++i) {
      rhs(sv[i]) += f(i);
      for (int j = 0; j <= n; ++j) trip.emplace_back(sv[i], sv[j], k(i, j));
    }
  }
  Eigen::SparseMatrix<double> stiff(nv, nv);
  stiff.setFromTriplets(trip.begin(), trip.end());

  // Pin u(0) = 0.
  Eigen::SparseMatrix<double> reduced = stiff.bottomRightCorner(nv - 1, nv - 1);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(nv);
  if (nv > 1) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(reduced);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("stiffness factorisation failed");
    u.tail(nv - 1) = ldlt.solve(rhs.tail(nv - 1));
  }
  HarmonicResult out;
  out.potential = u;
  const double rn = rhs.norm();
  out.normal_residual = rn > 0 ? (stiff * u - rhs).norm() / rn : (stiff * u - rhs).norm();
  out.form = make_one_form(x, g, omega - coboundary0(x, u));
  return out;
}

PeriodGram period_gram(const SimplicialComplex &x, const PLMetric &g) {
  PeriodGram p;
  p.basis = first_homology(x);
  const int r = p.basis.rank;
  if (r == 0) throw std::invalid_argument("period Gram needs b1 >= 1");
  for (int i = 0; i < r; ++i)
    p.harmonic.push_back(harmonic_representative(x, g, p.basis.cocycles[i].values.cast<double>()).form);
  p.cohomology.resize(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) p.cohomology(i, j) = p.cohomology(j, i) = l2_inner(x, g, p.harmonic[i], p.harmonic[j]);
  p.homology = p.cohomology.inverse();
  p.homology = 0.5 * (p.homology + p.homology.transpose()).eval();
  return p;
}

Eigen::VectorXd class_cocycle(const FirstHomology &basis, const IntVector &coeffs) {
  if (coeffs.size() != basis.rank) throw std::invalid_argument("class has wrong number of coordinates");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(basis.edge_voltage.cols());
  for (int i = 0; i < basis.rank; ++i) w += static_cast<double>(coeffs(i)) * basis.cocycles[i].values.cast<double>();
  return w;
}

IntVector shortest_class(const PeriodGram &p) { return shortest_vector(p.cohomology).coefficients; }

bool mod2_nontrivial(const SimplicialComplex &x, const Eigen::VectorXd &integral_cocycle) {
  const auto h = mod2_homology(x, 1);
  Gf2Vector w(x.count(1));
  for (Eigen::Index e = 0; e < integral_cocycle.size(); ++e) w.set(e, std::llround(integral_cocycle(e)) % 2 != 0);
  for (const auto &c : h.cycles)
    if (w.dot(c)) return true;
  return false;
}

CircleMap circle_map(const SimplicialComplex &x, const PLMetric &g, const Eigen::VectorXd &integral_cocycle) {
  const auto h = first_homology(x);
  bool nonzero = false;
  for (const auto &c : h.cycles) nonzero = nonzero || std::llround(integral_cocycle.dot(c.values.cast<double>())) != 0;
  if (!nonzero) throw std::invalid_argument("circle map needs a nonzero integral class");

  CircleMap out;
  out.cocycle = integral_cocycle;
  out.form = harmonic_representative(x, g, integral_cocycle).form;
  const int nv = x.num_vertices();
  std::vector<std::vector<std::pair<int, int>>> adj(nv);
  for (std::size_t e = 0; e < x.count(1); ++e) {
    const auto &s = x.simplex(1, static_cast<int>(e));
    adj[s[0]].emplace_back(s[1], static_cast<int>(e));
    adj[s[1]].emplace_back(s[0], static_cast<int>(e));
  }
  Eigen::VectorXd lift = Eigen::VectorXd::Constant(nv, NAN);
  lift(0) = 0.0;
  std::queue<int> q;
  q.push(0);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (const auto &[v, e] : adj[u]) {
      if (!std::isnan(lift(v))) continue;
      lift(v) = lift(u) + (u < v ? out.form.values(e) : -out.form.values(e));
      q.push(v);
    }
  }
  out.values = lift.unaryExpr([](double v) { return v - std::floor(v); });
  for (std::size_t e = 0; e < x.count(1); ++e) {
    const auto &s = x.simplex(1, static_cast<int>(e));
    const double diff = out.values(s[1]) - out.values(s[0]) - out.form.values(e);
    if (std::abs(diff - std::round(diff)) > 1e-9) throw std::logic_error("harmonic form has non-integral periods");
  }
  return out;
}

namespace {

// Levels c = t + k met by the local values, with the slice through the simplex.
void slice_simplex(const Eigen::MatrixXd &coords, const Eigen::VectorXd &phi, double t, int simplex,
                   std::vector<SliceFacet> *facets, double &measure) {
  const int n = static_cast<int>(coords.cols());
  const double lo = phi.minCoeff(), hi = phi.maxCoeff();
  for (double k = std::ceil(lo - t); t + k <= hi; k += 1.0) {
    const double c = t + k;
    std::vector<int> below, above;
    for (int i = 0; i <= n; ++i) (phi(i) < c ? below : above).push_back(i);
    if (below.empty() || above.empty()) continue;
    auto cross = [&](int a, int b) {
      const double s = (c - phi(a)) / (phi(b) - phi(a));
      return Eigen::VectorXd(coords.row(a).transpose() + s * (coords.row(b) - coords.row(a)).transpose());
    };
    std::vector<Eigen::VectorXd> pts;
    double m = 0.0;
    if (n == 2) {
      for (int a : below)
        for (int b : above) pts.push_back(cross(a, b));
      m = (pts[0] - pts[1]).norm();
    } else if (below.size() == 1 || above.size() == 1) {
      const int apex = below.size() == 1 ? below[0] : above[0];
      const auto &rest = below.size() == 1 ? above : below;
      for (int b : rest) pts.push_back(cross(apex, b));
      const Eigen::Vector3d u = pts[1] - pts[0], v = pts[2] - pts[0];
      m = 0.5 * u.cross(v).norm();
    } else {
      // Quadrilateral in cyclic order; area from its diagonals.
      const int a = below[0], b = below[1], c2 = above[0], d = above[1];
      pts = {cross(a, c2), cross(a, d), cross(b, d), cross(b, c2)};
      const Eigen::Vector3d d1 = pts[0] - pts[2], d2 = pts[1] - pts[3];
      m = 0.5 * d1.cross(d2).norm();
    }
    measure += m;
    if (facets) facets->push_back({simplex, std::move(pts)});
  }
}

struct SliceSetup {
  std::vector<Eigen::MatrixXd> coords;
  std::vector<Eigen::VectorXd> phi;
};

SliceSetup slice_setup(const SimplicialComplex &x, const PLMetric &g, const CircleMap &f) {
  const int n = x.dimension();
  if (n != 2 && n != 3) throw std::invalid_argument("level-set slicing supports dimensions 2 and 3");
  SliceSetup s;
  for (std::size_t i = 0; i < x.count(n); ++i) {
    const auto &sv = x.simplex(n, static_cast<int>(i));
    s.coords.push_back(simplex_embedding(squared_distances(x, g, n, static_cast<int>(i))));
    Eigen::VectorXd phi(n + 1);
    phi(0) = f.values(sv[0]);
    for (int j = 1; j <= n; ++j) phi(j) = phi(0) + f.form.values(x.edge(sv[0], sv[j]));
    s.phi.push_back(phi);
  }
  return s;
}

} // namespace

std::vector<SliceFacet> level_set(const SimplicialComplex &x, const PLMetric &g, const CircleMap &f, double t) {
  const auto setup = slice_setup(x, g, f);
  std::vector<SliceFacet> out;
  double m = 0.0;
  for (std::size_t i = 0; i < setup.phi.size(); ++i) slice_simplex(setup.coords[i], setup.phi[i], t, static_cast<int>(i), &out, m);
  return out;
}

SweepData sweep(const SimplicialComplex &x, const PLMetric &g, const CircleMap &f, int samples) {
  if (samples < 1) throw std::invalid_argument("sweep needs at least one sample");
  const auto setup = slice_setup(x, g, f);
  std::vector<double> vertex_levels(f.values.data(), f.values.data() + f.values.size());
  std::sort(vertex_levels.begin(), vertex_levels.end());

  SweepData out;
  out.t.resize(samples);
  out.slice_volume.assign(samples, 0.0);
  const double h = 1.0 / samples;
  for (int k = 0; k < samples; ++k) {
    double t = (k + 0.5) * h;
    // Nudge off vertex levels so every sampled slice is at a regular value.
    auto it = std::lower_bound(vertex_levels.begin(), vertex_levels.end(), t - 1e-12);
    while (it != vertex_levels.end() && std::abs(*it - t) <= 1e-12) {
      t += 1e-7 * h;
      it = std::lower_bound(vertex_levels.begin(), vertex_levels.end(), t - 1e-12);
    }
    out.t[k] = t;
  }
  for (std::size_t i = 0; i < setup.phi.size(); ++i) {
    const double lo = setup.phi[i].minCoeff(), hi = setup.phi[i].maxCoeff();
    for (int k = 0; k < samples; ++k) {
      const double t = out.t[k];
      if (std::floor(hi - t) < std::ceil(lo - t)) continue;
      slice_simplex(setup.coords[i], setup.phi[i], t, static_cast<int>(i), nullptr, out.slice_volume[k]);
    }
  }
  const auto best = std::min_element(out.slice_volume.begin(), out.slice_volume.end()) - out.slice_volume.begin();
  out.min_t = out.t[best];
  out.min_volume = out.slice_volume[best];
  out.min_slice = level_set(x, g, f, out.min_t);
  double sum = 0.0;
  for (double v : out.slice_volume) sum += v;
  out.coarea_numeric = sum * h;
  out.coarea_exact = coarea_integral(x, g, f.form);
  return out;
}

LemmaChain lemma_chain(const SimplicialComplex &x, const PLMetric &g, const Eigen::VectorXd &integral_cocycle,
                       int samples, double slack) {
  if (!mod2_nontrivial(x, integral_cocycle)) throw std::invalid_argument("class has trivial mod-2 reduction");
  LemmaChain c;
  const auto f = circle_map(x, g, integral_cocycle);
  c.sweep = sweep(x, g, f, samples);
  c.min_slice = c.sweep.min_volume;
  c.coarea = c.sweep.coarea_exact;
  c.l2_norm = l2_norm(x, g, f.form);
  c.volume = volume(x, g);
  c.l2_times_sqrt_volume = c.l2_norm * std::sqrt(c.volume);
  c.slice_below_coarea = c.min_slice <= c.coarea * (1.0 + slack) + slack;
  c.coarea_below_l2 = c.coarea <= c.l2_times_sqrt_volume * (1.0 + slack) + slack;
  return c;
}

} // namespace systolic
