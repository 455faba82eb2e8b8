#include "systolic/complex.hpp"
#include "systolic/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace systolic {

namespace {

std::string describe(const Simplex &s) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ')';
  return os.str();
}

} // namespace

SimplicialComplex::SimplicialComplex(int num_vertices, std::vector<Simplex> maximal)
    : num_vertices_(num_vertices), maximal_(std::move(maximal)) {
  if (num_vertices < 0) throw std::invalid_argument("negative vertex count");
  int dim = -1;
  for (auto &s : maximal_) {
    if (s.empty()) throw std::invalid_argument("empty simplex");
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw std::invalid_argument("simplex " + describe(s) + " repeats a vertex");
    if (s.front() < 0 || s.back() >= num_vertices)
      throw std::invalid_argument("simplex " + describe(s) + " has a vertex out of range");
    if (s.size() > 16) throw std::invalid_argument("simplex dimension too large");
    dim = std::max(dim, static_cast<int>(s.size()) - 1);
  }
  dim = std::max(dim, num_vertices > 0 ? 0 : -1);

  std::vector<std::set<Simplex>> sets(dim + 1);
  for (int v = 0; v < num_vertices; ++v) sets[0].insert({v});
  for (const auto &s : maximal_) {
    const int m = static_cast<int>(s.size());
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      Simplex f;
      for (int j = 0; j < m; ++j)
        if (mask & (1u << j)) f.push_back(s[j]);
      sets[f.size() - 1].insert(std::move(f));
    }
  }
  simplices_.resize(dim + 1);
  index_.resize(dim + 1);
  for (int k = 0; k <= dim; ++k) {
    simplices_[k].assign(sets[k].begin(), sets[k].end());
    for (std::size_t i = 0; i < simplices_[k].size(); ++i) index_[k].emplace(simplices_[k][i], static_cast<int>(i));
  }

  faces_.resize(dim + 1);
  cofaces_.resize(dim + 1);
  for (int k = 0; k <= dim; ++k) cofaces_[k].resize(simplices_[k].size());
  for (int k = 1; k <= dim; ++k) {
    faces_[k].reserve(simplices_[k].size() * (k + 1));
    for (std::size_t i = 0; i < simplices_[k].size(); ++i) {
      const auto &s = simplices_[k][i];
      for (int j = 0; j <= k; ++j) {
        Simplex f;
        f.reserve(k);
        for (int a = 0; a <= k; ++a)
          if (a != j) f.push_back(s[a]);
        const int fi = index_[k - 1].at(f);
        faces_[k].push_back(fi);
        cofaces_[k - 1][fi].push_back(static_cast<int>(i));
      }
    }
  }
}

int SimplicialComplex::find(const Simplex &s) const {
  const int k = static_cast<int>(s.size()) - 1;
  if (k < 0 || k > dimension()) return -1;
  const auto it = index_[k].find(s);
  return it == index_[k].end() ? -1 : it->second;
}

int SimplicialComplex::edge(int u, int v) const {
  if (u == v || dimension() < 1) return -1;
  if (u > v) std::swap(u, v);
  const auto it = index_[1].find(Simplex{u, v});
  return it == index_[1].end() ? -1 : it->second;
}

std::span<const int> SimplicialComplex::faces(int k, int i) const {
  return {faces_.at(k).data() + static_cast<std::size_t>(i) * (k + 1), static_cast<std::size_t>(k + 1)};
}

IntMatrix SimplicialComplex::boundary_matrix(int k) const {
  IntMatrix d = IntMatrix::Zero(count(k - 1), count(k));
  if (k < 1 || k > dimension()) return d;
  for (std::size_t i = 0; i < count(k); ++i) {
    const auto f = faces(k, static_cast<int>(i));
    for (int j = 0; j <= k; ++j) d(f[j], i) = (j % 2 == 0) ? 1 : -1;
  }
  return d;
}

std::vector<Gf2Vector> SimplicialComplex::boundary_rows_mod2(int k) const {
  std::vector<Gf2Vector> rows(count(k - 1), Gf2Vector(count(k)));
  if (k < 1 || k > dimension()) return rows;
  for (std::size_t i = 0; i < count(k); ++i)
    for (int f : faces(k, static_cast<int>(i))) rows[f].flip(i);
  return rows;
}

long long SimplicialComplex::euler_characteristic() const {
  long long chi = 0;
  for (int k = 0; k <= dimension(); ++k) chi += (k % 2 == 0 ? 1 : -1) * static_cast<long long>(count(k));
  return chi;
}

bool is_connected(const SimplicialComplex &x) {
  const int v = x.num_vertices();
  if (v == 0) return false;
  std::vector<int> parent(v);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  int components = v;
  if (x.dimension() >= 1)
    for (const auto &e : x.simplices(1)) {
      const int a = root(e[0]), b = root(e[1]);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
  return components == 1;
}

bool is_closed_pseudomanifold(const SimplicialComplex &x) {
  const int n = x.dimension();
  if (n < 1) return false;
  for (const auto &s : x.maximal())
    if (static_cast<int>(s.size()) != n + 1) return false;
  for (std::size_t i = 0; i < x.count(n - 1); ++i)
    if (x.cofaces(n - 1, static_cast<int>(i)).size() != 2) return false;
  return true;
}

std::vector<int> coherent_orientation(const SimplicialComplex &x) {
  if (!is_closed_pseudomanifold(x)) return {};
  const int n = x.dimension();
  const std::size_t top = x.count(n);
  std::vector<int> sign(top, 0);
  // Position of face f inside simplex s.
  auto slot = [&](int s, int f) {
    const auto fs = x.faces(n, s);
    return static_cast<int>(std::find(fs.begin(), fs.end(), f) - fs.begin());
  };
  for (std::size_t start = 0; start < top; ++start) {
    if (sign[start]) continue;
    sign[start] = 1;
    std::queue<int> q;
    q.push(static_cast<int>(start));
    while (!q.empty()) {
      const int s = q.front();
      q.pop();
      const auto fs = x.faces(n, s);
      for (int j = 0; j <= n; ++j) {
        for (int t : x.cofaces(n - 1, fs[j])) {
          if (t == s) continue;
          const int jt = slot(t, fs[j]);
          // Induced orientations on the shared face must cancel.
          const int want = -sign[s] * ((j + jt) % 2 == 0 ? 1 : -1);
          if (!sign[t]) {
            sign[t] = want;
            q.push(t);
          } else if (sign[t] != want) {
            return {};
          }
        }
      }
    }
  }
  return sign;
}

Diagnostics validate(const SimplicialComplex &x, const PLMetric &g) {
  Diagnostics d;
  if (static_cast<std::size_t>(g.size()) != x.count(1)) {
    d.metric_valid = false;
    d.issues.push_back("metric has " + std::to_string(g.size()) + " lengths for " + std::to_string(x.count(1)) +
                       " edges");
  }
  d.connected = is_connected(x);
  if (!d.connected) d.issues.push_back("complex is not connected");
  d.pseudomanifold = is_closed_pseudomanifold(x);
  if (!d.pseudomanifold) {
    const int n = x.dimension();
    std::string where;
    for (std::size_t i = 0; n >= 1 && i < x.count(n - 1); ++i)
      if (x.cofaces(n - 1, static_cast<int>(i)).size() != 2) {
        where = " at " + describe(x.simplex(n - 1, static_cast<int>(i)));
        break;
      }
    d.issues.push_back("not a closed pseudomanifold" + where);
    d.orientable = false;
  } else {
    d.orientable = !coherent_orientation(x).empty();
  }
  if (d.metric_valid) {
    for (int k = 1; k <= x.dimension() && d.metric_valid; ++k)
      for (std::size_t i = 0; i < x.count(k); ++i) {
        if (k == 1 && !(g(i) > 0.0 && std::isfinite(g(i)))) {
          d.metric_valid = false;
          d.issues.push_back("nonpositive edge length on " + describe(x.simplex(1, static_cast<int>(i))));
          break;
        }
        if (k >= 2 && !is_nondegenerate(squared_distances(x, g, k, static_cast<int>(i)))) {
          d.metric_valid = false;
          d.issues.push_back("Cayley-Menger violation on " + describe(x.simplex(k, static_cast<int>(i))));
          break;
        }
      }
  }
  return d;
}

void require_valid(const SimplicialComplex &x, const PLMetric &g, bool manifold_mode) {
  const auto d = validate(x, g);
  if (!d.ok(manifold_mode)) {
    for (const auto &issue : d.issues)
      if (manifold_mode || issue.rfind("not a closed", 0) != 0) throw std::invalid_argument(issue);
    throw std::invalid_argument("invalid metric complex");
  }
}

double volume(const SimplicialComplex &x, const PLMetric &g) {
  const int n = x.dimension();
  double v = 0.0;
  for (std::size_t i = 0; i < x.count(n); ++i) v += simplex_volume(x, g, n, static_cast<int>(i));
  return v;
}

} // namespace systolic
