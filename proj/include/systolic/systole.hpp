#pragma once

#include "systolic/complex.hpp"
#include "systolic/constructions.hpp"
#include "systolic/homology.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace systolic {

enum class Exactness { Exact, UpperBound, LowerBound };

const char *to_string(Exactness e);

/// Weaker of two flags (anything combined with a bound is that bound).
Exactness weakest(Exactness a, Exactness b);

struct SystoleValue {
  double value = std::numeric_limits<double>::infinity();
  /// Witness cycle (edge 1-chain for loops, (n-1)-chain for hypersurfaces).
  std::optional<Chain<long long>> witness;
  Exactness exactness = Exactness::Exact;
  std::string provenance;

  bool finite() const { return value < std::numeric_limits<double>::infinity(); }
};

/// Total length sum |c_e| l_e of an edge chain.
double chain_length(const PLMetric &g, const Chain<long long> &c);

/// Exact shortest edge loop with nonzero class in H_1(X; Z) or H_1(X; Z/2).
SystoleValue sysh1(const SimplicialComplex &x, const PLMetric &g, Ring ring);

/// Shortest edge loop whose lift to one of the covers (or to the H_1 cover)
/// does not close up. Such loops are noncontractible, so the value bounds the
/// homotopy 1-systole from above; `complete` asserts that the listed covers
/// detect every nontrivial element of the fundamental group.
SystoleValue pisys1_upper(const SimplicialComplex &x, const PLMetric &g, const std::vector<CoverSpec> &covers,
                          bool complete = false);

/// Holonomy of a closed edge walk (vertex sequence) in a cover.
int holonomy(const SimplicialComplex &x, const CoverSpec &c, const std::vector<int> &walk);

struct StableNormValue {
  IntVector cls;
  double value = 0.0;
  double dual_value = 0.0;
  Chain<double> cycle;     // minimising real 1-cycle
  Cochain<double> cocycle;       // closed, |w_e| <= l_e, <w, cycle> = dual_value
  Eigen::VectorXd cocycle_class; // coordinates of `cocycle` in the H^1 basis
};

/// Stable norm of an integral class (coordinates in `h.cycles`) by the
/// mass-minimising linear program and its comass dual.
StableNormValue stable_norm(const SimplicialComplex &x, const PLMetric &g, const FirstHomology &h, const IntVector &cls);
StableNormValue stable_norm(const SimplicialComplex &x, const PLMetric &g, const IntVector &cls);

struct StableSystole {
  SystoleValue systole;
  IntVector cls;       // minimising class (empty if b1 = 0)
  Chain<double> cycle; // minimising real cycle
  int classes_evaluated = 0;
};

/// Minimum stable norm over nonzero classes of the free part of H_1(X; Z),
/// certified by dual bounds; +inf when b1 = 0.
StableSystole stsys1_detailed(const SimplicialComplex &x, const PLMetric &g);
SystoleValue stsys1(const SimplicialComplex &x, const PLMetric &g);

/// min(pisys1_upper, stsys1) with the weaker exactness flag.
SystoleValue sys1_aggregate(const SimplicialComplex &x, const PLMetric &g, const std::vector<CoverSpec> &covers,
                            bool complete = false);

} // namespace systolic
