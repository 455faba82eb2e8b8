#pragma once

#include "systolic/complex.hpp"
#include "systolic/gf2.hpp"

#include <vector>

namespace systolic {

struct HomologyGroup {
  long long betti = 0;            // rank over Z, or dimension over Z/2
  std::vector<long long> torsion; // invariant factors > 1 (integer ring only)
};

/// H_1(X; Z) computed on a spanning-tree quotient of the 1-skeleton.
///
/// Classes have coordinates in Z^rank (+) Z/t_1 (+) ... ; `edge_voltage`
/// column e holds the coordinates of the oriented edge e (tree edges are
/// zero), so the class of a closed edge walk is the sum of its voltages.
struct FirstHomology {
  int rank = 0;
  std::vector<long long> torsion;
  IntMatrix edge_voltage;                     // (rank + torsion.size()) x E
  std::vector<Cochain<long long>> cocycles;   // integral basis of H^1(X; Z)
  std::vector<Chain<long long>> cycles;       // dual generators, <cocycles[i], cycles[j]> = delta_ij
  std::vector<Chain<long long>> torsion_cycles;

  /// Coordinates of a 1-cycle (torsion part reduced to [0, t_i)).
  IntVector classify(const Chain<long long> &cycle) const;
};

FirstHomology first_homology(const SimplicialComplex &x);

/// Mod-2 (co)homology in degree k with dual bases:
/// cocycles[i] . cycles[j] = delta_ij.
struct Mod2Homology {
  int degree = 0;
  std::vector<Gf2Vector> cycles;
  std::vector<Gf2Vector> cocycles;

  std::size_t dim() const { return cycles.size(); }
  /// Class coordinates of a k-cycle.
  Gf2Vector classify(const Gf2Vector &cycle) const;
};

Mod2Homology mod2_homology(const SimplicialComplex &x, int k);

struct HomologyResult {
  Ring ring = Ring::Integer;
  std::vector<HomologyGroup> groups; // degrees 0..n
  /// Representatives of H_1 and H_{n-1} (coefficients 0/1 over Z/2).
  std::vector<Chain<long long>> h1_cycles;
  std::vector<Chain<long long>> codim1_cycles;
  /// Basis of H^1 modulo coboundaries (integral for Z, mod 2 for Z/2).
  std::vector<Cochain<long long>> h1_cocycles;
};

/// Integral representatives of H_k: free generators first, then torsion generators.
std::vector<Chain<long long>> integer_cycles(const SimplicialComplex &x, int k);

HomologyResult homology(const SimplicialComplex &x, Ring ring);

/// Betti numbers and torsion only, all degrees.
std::vector<HomologyGroup> homology_groups(const SimplicialComplex &x, Ring ring);

} // namespace systolic
