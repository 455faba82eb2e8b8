#include "systolic/constructions.hpp"
#include "systolic/geometry.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace systolic {

int FiniteGroup::inverse(int a) const {
  for (int b = 0; b < order(); ++b)
    if (table[a][b] == identity) return b;
  throw std::logic_error("group element without inverse");
}

FiniteGroup FiniteGroup::cyclic(int m) {
  if (m < 1) throw std::invalid_argument("cyclic group order must be positive");
  FiniteGroup g;
  g.table.assign(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) g.table[a][b] = (a + b) % m;
  return g;
}

FiniteGroup FiniteGroup::z2_power(int d) {
  if (d < 0 || d > 12) throw std::invalid_argument("(Z/2)^d supported for 0 <= d <= 12");
  const int m = 1 << d;
  FiniteGroup g;
  g.table.assign(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) g.table[a][b] = a ^ b;
  return g;
}

void FiniteGroup::check() const {
  const int m = order();
  if (m < 1) throw std::invalid_argument("empty group table");
  for (const auto &row : table) {
    if (static_cast<int>(row.size()) != m) throw std::invalid_argument("group table is not square");
    for (int v : row)
      if (v < 0 || v >= m) throw std::invalid_argument("group table entry out of range");
  }
  for (int a = 0; a < m; ++a)
    if (table[identity][a] != a || table[a][identity] != a) throw std::invalid_argument("group table has no identity");
  for (int a = 0; a < m; ++a) {
    std::vector<bool> seen(m, false);
    for (int b = 0; b < m; ++b) seen[table[a][b]] = true;
    if (std::count(seen.begin(), seen.end(), false)) throw std::invalid_argument("group table row is not a permutation");
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]]) throw std::invalid_argument("group table is not associative");
  }
}

namespace {

// Colour along the oriented pair u -> v.
int oriented_color(const SimplicialComplex &x, const CoverSpec &c, int u, int v) {
  const int e = x.edge(u, v);
  const int col = c.edge_color.at(e);
  return u < v ? col : c.group.inverse(col);
}

} // namespace

int first_non_flat_triangle(const SimplicialComplex &x, const CoverSpec &c) {
  if (c.edge_color.size() != x.count(1)) throw std::invalid_argument("colouring size does not match edge count");
  for (std::size_t t = 0; t < x.count(2); ++t) {
    const auto &s = x.simplex(2, static_cast<int>(t));
    const int ab = c.edge_color[x.edge(s[0], s[1])];
    const int bc = c.edge_color[x.edge(s[1], s[2])];
    const int ac = c.edge_color[x.edge(s[0], s[2])];
    if (c.group.mul(ab, bc) != ac) return static_cast<int>(t);
  }
  return -1;
}

CoverResult build_cover(const SimplicialComplex &x, const PLMetric &g, const CoverSpec &c) {
  if (first_non_flat_triangle(x, c) >= 0) throw std::invalid_argument("edge colouring is not flat");
  const int m = c.group.order();
  const int nv = x.num_vertices();
  std::vector<Simplex> lifted;
  for (const auto &s : x.maximal())
    for (int h = 0; h < m; ++h) {
      Simplex ls;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const int sheet = i == 0 ? h : c.group.mul(h, oriented_color(x, c, s[0], s[i]));
        ls.push_back(sheet * nv + s[i]);
      }
      lifted.push_back(std::move(ls));
    }
  CoverResult out;
  out.mesh.complex = SimplicialComplex(nv * m, lifted);
  const auto &cx = out.mesh.complex;
  out.mesh.metric.resize(cx.count(1));
  for (std::size_t e = 0; e < cx.count(1); ++e) {
    const auto &s = cx.simplex(1, static_cast<int>(e));
    out.mesh.metric(e) = g(x.edge(s[0] % nv, s[1] % nv));
  }
  out.projection.resize(nv * m);
  for (int v = 0; v < nv * m; ++v) out.projection[v] = v % nv;

  std::vector<int> parent(nv * m);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  out.components = nv * m;
  for (const auto &s : cx.simplices(1)) {
    const int a = root(s[0]), b = root(s[1]);
    if (a != b) {
      parent[a] = b;
      --out.components;
    }
  }
  return out;
}

CoverSpec cyclic_cover(const SimplicialComplex &x, const Eigen::Matrix<long long, Eigen::Dynamic, 1> &cocycle, int m) {
  CoverSpec c{FiniteGroup::cyclic(m), std::vector<int>(x.count(1))};
  for (std::size_t e = 0; e < x.count(1); ++e) c.edge_color[e] = static_cast<int>(((cocycle(e) % m) + m) % m);
  return c;
}

CoverSpec z2_cover(const SimplicialComplex &x, const std::vector<Gf2Vector> &cocycles) {
  CoverSpec c{FiniteGroup::z2_power(static_cast<int>(cocycles.size())), std::vector<int>(x.count(1), 0)};
  for (std::size_t i = 0; i < cocycles.size(); ++i)
    for (auto e : cocycles[i].support()) c.edge_color[e] |= 1 << i;
  return c;
}

CoverSpec read_coloring(std::istream &in, const SimplicialComplex &x) {
  CoverSpec c;
  int m = -1;
  std::vector<std::tuple<int, int, int>> colors;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "group") {
      if (!(ls >> m) || m < 1) throw std::runtime_error("bad group order");
    } else if (key == "row") {
      if (m < 0) throw std::runtime_error("'row' before 'group'");
      std::vector<int> row(m);
      for (auto &v : row)
        if (!(ls >> v)) throw std::runtime_error("group table row needs " + std::to_string(m) + " entries");
      c.group.table.push_back(row);
    } else if (key == "color") {
      int u, v, g;
      if (!(ls >> u >> v >> g)) throw std::runtime_error("color needs u v g");
      colors.emplace_back(u, v, g);
    } else {
      throw std::runtime_error("unknown colouring statement '" + key + "'");
    }
  }
  if (m < 0) throw std::runtime_error("colouring is missing 'group m'");
  if (c.group.table.empty()) {
    c.group = FiniteGroup::cyclic(m);
  } else {
    if (static_cast<int>(c.group.table.size()) != m) throw std::runtime_error("group table needs m rows");
    c.group.identity = -1;
    for (int a = 0; a < m && c.group.identity < 0; ++a) {
      bool ok = true;
      for (int b = 0; b < m && ok; ++b) ok = c.group.table[a][b] == b && c.group.table[b][a] == b;
      if (ok) c.group.identity = a;
    }
    if (c.group.identity < 0) throw std::runtime_error("group table has no identity");
  }
  c.group.check();
  c.edge_color.assign(x.count(1), c.group.identity);
  for (const auto &[u, v, g] : colors) {
    const int e = x.edge(u, v);
    if (e < 0) throw std::runtime_error("color given for non-edge " + std::to_string(u) + " " + std::to_string(v));
    if (g < 0 || g >= m) throw std::runtime_error("colour out of range");
    c.edge_color[e] = u < v ? g : c.group.inverse(g);
  }
  return c;
}

void write_coloring(std::ostream &out, const SimplicialComplex &x, const CoverSpec &c) {
  out << "group " << c.group.order() << '\n';
  for (const auto &row : c.group.table) {
    out << "row";
    for (int v : row) out << ' ' << v;
    out << '\n';
  }
  for (std::size_t e = 0; e < x.count(1); ++e)
    if (c.edge_color[e] != c.group.identity) {
      const auto &s = x.simplex(1, static_cast<int>(e));
      out << "color " << s[0] << ' ' << s[1] << ' ' << c.edge_color[e] << '\n';
    }
}

MetricComplex product_complex(const SimplicialComplex &x, const PLMetric &gx, const SimplicialComplex &y,
                              const PLMetric &gy) {
  const int nx = x.dimension(), ny = y.dimension();
  const int vy = y.num_vertices();
  auto dist = [](const SimplicialComplex &c, const PLMetric &g, int a, int b) {
    return a == b ? 0.0 : g(c.edge(a, b));
  };
  std::vector<Simplex> cells;
  for (const auto &s : x.simplices(nx))
    for (const auto &t : y.simplices(ny)) {
      // Monotone lattice paths from (0,0) to (nx,ny): choose which steps move in X.
      const int steps = nx + ny;
      for (unsigned mask = 0; mask < (1u << steps); ++mask) {
        if (__builtin_popcount(mask) != nx) continue;
        Simplex cell;
        int i = 0, j = 0;
        cell.push_back(s[i] * vy + t[j]);
        for (int k = 0; k < steps; ++k) {
          if (mask & (1u << k))
            ++i;
          else
            ++j;
          cell.push_back(s[i] * vy + t[j]);
        }
        cells.push_back(std::move(cell));
      }
    }
  SimplicialComplex p(x.num_vertices() * vy, cells);
  PLMetric g(p.count(1));
  for (std::size_t e = 0; e < p.count(1); ++e) {
    const auto &s = p.simplex(1, static_cast<int>(e));
    const double a = dist(x, gx, s[0] / vy, s[1] / vy);
    const double b = dist(y, gy, s[0] % vy, s[1] % vy);
    g(e) = std::sqrt(a * a + b * b);
  }
  return {std::move(p), std::move(g)};
}

bool is_simplicial_map(const SimplicialComplex &x, const std::vector<int> &f, const SimplicialComplex &y) {
  if (static_cast<int>(f.size()) != x.num_vertices()) return false;
  for (int v : f)
    if (v < 0 || v >= y.num_vertices()) return false;
  for (const auto &s : x.maximal()) {
    Simplex img;
    for (int v : s) img.push_back(f[v]);
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    if (y.find(img) < 0) return false;
  }
  return true;
}

PullbackResult pullback_metric(const SimplicialComplex &x, const std::vector<int> &f, const SimplicialComplex &y,
                               const PLMetric &gy, double eps) {
  if (!is_simplicial_map(x, f, y)) throw std::invalid_argument("map is not simplicial");
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  PullbackResult out;
  const double floor_len = eps * gy.minCoeff();
  PLMetric base(x.count(1));
  out.collapsed.assign(x.count(1), false);
  for (std::size_t e = 0; e < x.count(1); ++e) {
    const auto &s = x.simplex(1, static_cast<int>(e));
    const int a = f[s[0]], b = f[s[1]];
    if (a == b) {
      out.collapsed[e] = true;
      base(e) = floor_len;
    } else {
      base(e) = gy(y.edge(a, b));
    }
  }
  auto inflated = [&](double r) {
    PLMetric g = base;
    for (std::size_t e = 0; e < x.count(1); ++e)
      if (!out.collapsed[e]) g(e) *= r;
    return g;
  };
  auto valid = [&](const PLMetric &g) {
    for (int k = 2; k <= x.dimension(); ++k)
      for (std::size_t i = 0; i < x.count(k); ++i)
        if (!is_nondegenerate(squared_distances(x, g, k, static_cast<int>(i)))) return false;
    return true;
  };
  if (valid(base)) {
    out.metric = base;
    return out;
  }
  double lo = 1.0, hi = 1.0 + 10.0 * eps;
  if (!valid(inflated(hi))) throw std::runtime_error("pullback metric cannot be repaired within factor 1 + 10 eps");
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (valid(inflated(mid)) ? hi : lo) = mid;
  }
  out.repair_factor = hi;
  out.metric = inflated(hi);
  return out;
}

} // namespace systolic
