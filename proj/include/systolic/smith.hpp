#pragma once

#include "systolic/lattice.hpp"

#include <vector>

namespace systolic {

/// U A V = D with D diagonal, d_0 | d_1 | ... and U, V unimodular.
/// Only the left transform U (and its inverse) is tracked.
struct SmithForm {
  std::vector<long long> diagonal; // nonzero invariant factors, length = rank
  IntMatrix left;                  // U
  IntMatrix left_inverse;          // U^{-1}

  long long rank() const { return static_cast<long long>(diagonal.size()); }
};

/// Integer Smith normal form. Throws std::overflow_error if intermediate
/// entries leave the 64-bit range.
SmithForm smith_normal_form(IntMatrix a, bool track_left = true);

} // namespace systolic
