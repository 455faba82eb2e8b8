#pragma once

#include "systolic/complex.hpp"
#include "systolic/gf2.hpp"
#include "systolic/systole.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace systolic {

/// Node per n-simplex, arc per (n-1)-simplex joining its two cofaces.
struct DualGraph {
  int nodes = 0;
  std::vector<std::array<int, 2>> arcs;
  Eigen::VectorXd weight; // (n-1)-volume of the facet
  std::vector<int> facet; // arc -> index into simplices(n-1)
};

/// Throws std::invalid_argument unless every (n-1)-simplex has exactly two cofaces.
DualGraph dual_graph(const SimplicialComplex &x, const PLMetric &g);

enum class Z2Mode { Exact, Heuristic };

struct Z2Options {
  Z2Mode mode = Z2Mode::Exact;
  double timeout_seconds = 120.0; // per class
  std::uint64_t seed = 0;
  int restarts = 24;
  int threads = 1;
  /// For n = 2 use the shortest-loop engine instead of the labeling solver.
  bool delegate_surfaces = true;
};

struct Z2ClassResult {
  Gf2Vector cls;      // coordinates in the H_{n-1}(X; Z/2) basis
  double lower = 0.0; // certified lower bound
  double upper = 0.0; // weight of `witness`
  bool optimal = false;
  bool pruned = false; // lower bound already exceeds the global incumbent
  bool timed_out = false;
  Gf2Vector witness; // facet set, a mod-2 (n-1)-cycle in the class
  long long nodes_explored = 0;
};

struct Z2Result {
  SystoleValue systole;
  std::vector<Z2ClassResult> classes;
  bool timed_out = false;
  double lower_bound = 0.0; // certified lower bound for the minimum over classes
};

/// Codimension-1 systole over Z/2 of a closed 2- or 3-pseudomanifold.
Z2Result sys_codim1_z2(const SimplicialComplex &x, const PLMetric &g, const Z2Options &options = {});

/// Minimum-weight facet set z + delta(labels) over labelings of the dual
/// nodes, for a fixed mod-2 (n-1)-cycle z.
Z2ClassResult solve_class(const DualGraph &d, const Gf2Vector &representative, const Z2Options &options,
                          double incumbent = std::numeric_limits<double>::infinity());

struct WitnessVerdict {
  bool is_cycle = false;
  bool nontrivial = false;
  Gf2Vector class_coordinates;
};

WitnessVerdict witness_verify(const SimplicialComplex &x, const Gf2Vector &cycle);

/// Aggregated systole in degree k = 1 (delegates to sys1_aggregate) or
/// k = n - 1 (Z/2 hypersurfaces minimised over the trivial and listed covers).
SystoleValue sysk_aggregate(const SimplicialComplex &x, const PLMetric &g, int k, const std::vector<CoverSpec> &covers,
                            const Z2Options &options = {});

} // namespace systolic
