#include "systolic/complex.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace systolic {

MetricComplex read_mesh(std::istream &in) {
  int dim = -1, vertices = -1;
  std::vector<Simplex> simplices;
  std::vector<std::tuple<int, int, double>> lengths;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string &what) {
    throw std::runtime_error("mesh line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "dim") {
      if (!(ls >> dim) || dim < 1) fail("bad dimension");
    } else if (key == "vertices") {
      if (!(ls >> vertices) || vertices < 1) fail("bad vertex count");
    } else if (key == "simplex") {
      if (dim < 0) fail("'simplex' before 'dim'");
      Simplex s(dim + 1);
      for (auto &v : s)
        if (!(ls >> v)) fail("simplex needs " + std::to_string(dim + 1) + " vertices");
      simplices.push_back(std::move(s));
    } else if (key == "edgelen") {
      int u, v;
      double l;
      if (!(ls >> u >> v >> l)) fail("edgelen needs u v length");
      lengths.emplace_back(u, v, l);
    } else {
      fail("unknown statement '" + key + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing token '" + extra + "'");
  }
  if (dim < 0 || vertices < 0) throw std::runtime_error("mesh is missing 'dim' or 'vertices'");
  MetricComplex out{SimplicialComplex(vertices, std::move(simplices)), {}};
  if (out.complex.dimension() != dim) throw std::runtime_error("mesh has no simplices of the declared dimension");
  out.metric = PLMetric::Constant(out.complex.count(1), -1.0);
  for (const auto &[u, v, l] : lengths) {
    const int e = out.complex.edge(u, v);
    if (e < 0) throw std::runtime_error("edgelen for non-edge " + std::to_string(u) + " " + std::to_string(v));
    if (out.metric(e) != -1.0) throw std::runtime_error("edge listed twice: " + std::to_string(u) + " " + std::to_string(v));
    out.metric(e) = l;
  }
  for (std::size_t e = 0; e < out.complex.count(1); ++e)
    if (out.metric(e) == -1.0) {
      const auto &s = out.complex.simplex(1, static_cast<int>(e));
      throw std::runtime_error("missing edgelen for " + std::to_string(s[0]) + " " + std::to_string(s[1]));
    }
  return out;
}

MetricComplex read_mesh_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file " + path);
  return read_mesh(in);
}

void write_mesh(std::ostream &out, const SimplicialComplex &x, const PLMetric &g) {
  out << "dim " << x.dimension() << "\nvertices " << x.num_vertices() << '\n';
  for (const auto &s : x.simplices(x.dimension())) {
    out << "simplex";
    for (int v : s) out << ' ' << v;
    out << '\n';
  }
  out.precision(17);
  for (std::size_t e = 0; e < x.count(1); ++e) {
    const auto &s = x.simplex(1, static_cast<int>(e));
    out << "edgelen " << s[0] << ' ' << s[1] << ' ' << g(e) << '\n';
  }
}

} // namespace systolic
