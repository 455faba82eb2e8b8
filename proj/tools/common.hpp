#pragma once

#include "systolic/complex.hpp"
#include "systolic/constructions.hpp"
#include "systolic/systole.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tools {

using nlohmann::json;

inline json number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

inline std::vector<systolic::CoverSpec> read_covers(const std::string &dir, const systolic::SimplicialComplex &x) {
  std::vector<systolic::CoverSpec> out;
  if (dir.empty()) return out;
  std::vector<std::filesystem::path> files;
  for (const auto &e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto &f : files) {
    std::ifstream in(f);
    out.push_back(systolic::read_coloring(in, x));
  }
  return out;
}

/// Lines `edge u v value` give the cochain on the oriented edge u -> v.
inline Eigen::VectorXd read_cocycle(std::istream &in, const systolic::SimplicialComplex &x) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(x.count(1)));
  std::string line;
  while (std::getline(in, line)) {
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    int u, v;
    double value;
    if (key != "edge" || !(ls >> u >> v >> value)) throw std::runtime_error("malformed cocycle line: " + line);
    const int e = x.edge(u, v);
    if (e < 0) throw std::runtime_error("cocycle names a missing edge: " + line);
    w(e) = u < v ? value : -value;
  }
  return w;
}

inline json witness_edges(const systolic::SimplicialComplex &x, const systolic::Chain<long long> &c) {
  json out = json::array();
  for (Eigen::Index i = 0; i < c.values.size(); ++i)
    if (c.values(i) != 0) {
      const auto &s = x.simplex(c.degree, static_cast<int>(i));
      out.push_back({{"simplex", s}, {"coefficient", c.values(i)}});
    }
  return out;
}

inline json systole_json(const systolic::SimplicialComplex &x, const systolic::SystoleValue &s) {
  json j{{"value", number(s.value)}, {"exactness", systolic::to_string(s.exactness)}, {"provenance", s.provenance}};
  j["witness"] = s.witness ? witness_edges(x, *s.witness) : json(nullptr);
  return j;
}

inline int threads_from_env() {
  if (const char *t = std::getenv("SYSVERIFY_THREADS")) {
    const int n = std::atoi(t);
    if (n >= 1) return n;
  }
  return 1;
}

template <typename F> int guarded(F &&body) {
  try {
    return body();
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

inline void emit(const json &j, const std::string &path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

} // namespace tools
