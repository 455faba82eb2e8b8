#pragma once

#include "systolic/complex.hpp"
#include "systolic/homology.hpp"

#include <Eigen/Dense>

#include <vector>

namespace systolic {

/// Real 1-cochain read as a constant covector on each top simplex.
struct OneForm {
  Eigen::VectorXd values; // oriented lower -> higher vertex
  /// Covector of each top simplex in that simplex's local frame
  /// (see `simplex_embedding`).
  std::vector<Eigen::VectorXd> covectors;
  /// max over triangles of |theta(ab) + theta(bc) - theta(ac)|.
  double closedness_residual = 0.0;
};

/// Builds the per-simplex covectors; throws std::invalid_argument unless
/// the cochain is closed (1e-10 relative to its largest value).
OneForm make_one_form(const SimplicialComplex &x, const PLMetric &g, const Eigen::VectorXd &values);

/// |theta|_2 = (sum_s vol(s) |theta_s|^2)^(1/2).
double l2_norm(const SimplicialComplex &x, const PLMetric &g, const OneForm &theta);
/// max_s |theta_s|.
double comass(const OneForm &theta);
/// L2 inner product of two forms.
double l2_inner(const SimplicialComplex &x, const PLMetric &g, const OneForm &a, const OneForm &b);
/// sum_s vol(s) |theta_s|.
double coarea_integral(const SimplicialComplex &x, const PLMetric &g, const OneForm &theta);

struct HarmonicResult {
  OneForm form;               // eta = omega - d u
  Eigen::VectorXd potential;  // u, normalised to u(0) = 0
  double normal_residual = 0; // relative residual of the normal equations
};

/// L2-minimal representative of the class of a closed 1-cochain.
HarmonicResult harmonic_representative(const SimplicialComplex &x, const PLMetric &g, const Eigen::VectorXd &omega);

struct PeriodGram {
  FirstHomology basis;
  std::vector<OneForm> harmonic; // harmonic representatives of basis.cocycles
  Eigen::MatrixXd cohomology;    // <eta_i, eta_j>
  Eigen::MatrixXd homology;      // inverse: Gram of the dual norm on H_1
};

PeriodGram period_gram(const SimplicialComplex &x, const PLMetric &g);

/// Integral cocycle sum_i coeffs_i * basis.cocycles[i].
Eigen::VectorXd class_cocycle(const FirstHomology &basis, const IntVector &coeffs);

/// Class minimising the dual L2 norm (shortest vector of the cohomology Gram).
IntVector shortest_class(const PeriodGram &p);

struct CircleMap {
  Eigen::VectorXd values; // in [0, 1)
  OneForm form;           // harmonic df
  Eigen::VectorXd cocycle;
};

/// Circle-valued map f with df = harmonic representative of the integral
/// cocycle, integrated along a spanning tree from vertex 0.
CircleMap circle_map(const SimplicialComplex &x, const PLMetric &g, const Eigen::VectorXd &integral_cocycle);

struct SliceFacet {
  int simplex = 0;
  std::vector<Eigen::VectorXd> points; // local frame of `simplex`
};

struct SweepData {
  std::vector<double> t;
  std::vector<double> slice_volume;
  double min_t = 0.0;
  double min_volume = 0.0;
  std::vector<SliceFacet> min_slice;
  double coarea_exact = 0.0;   // sum_s vol(s) |df_s|
  double coarea_numeric = 0.0; // midpoint rule over the samples
};

/// (n-1)-volume of f^{-1}(t) for `samples` levels t (n in {2, 3}).
SweepData sweep(const SimplicialComplex &x, const PLMetric &g, const CircleMap &f, int samples);

/// Slice of f^{-1}(t) through every top simplex.
std::vector<SliceFacet> level_set(const SimplicialComplex &x, const PLMetric &g, const CircleMap &f, double t);

struct LemmaChain {
  double min_slice = 0.0;
  double coarea = 0.0;
  double l2_norm = 0.0; // |eta|_2 = dual L2 norm of the class
  double volume = 0.0;
  double l2_times_sqrt_volume = 0.0;
  bool slice_below_coarea = false;
  bool coarea_below_l2 = false;
  SweepData sweep;
};

/// Evaluates min_t vol(f^{-1}(t)) <= int |df| <= |eta|_2 vol^(1/2) for an
/// integral class with nonzero mod-2 reduction.
LemmaChain lemma_chain(const SimplicialComplex &x, const PLMetric &g, const Eigen::VectorXd &integral_cocycle,
                       int samples = 10000, double slack = 1e-9);

/// Whether the mod-2 reduction of an integral cocycle is nonzero in H^1(X; Z/2).
bool mod2_nontrivial(const SimplicialComplex &x, const Eigen::VectorXd &integral_cocycle);

} // namespace systolic
