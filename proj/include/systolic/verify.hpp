#pragma once

#include "systolic/complex.hpp"
#include "systolic/constructions.hpp"
#include "systolic/systole.hpp"
#include "systolic/z2_hypersurface.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace systolic {

enum class Verdict { Holds, Flagged, Violated };
const char *to_string(Verdict v);

/// lhs <= rhs + slack. Hard assertions are exact in the discrete model; soft
/// ones compare a discrete quantity against a bound proved for the PL one.
struct Assertion {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool hard = true;
  bool inputs_exact = true;
  Verdict verdict = Verdict::Holds;
};

struct SyscatBounds {
  std::optional<int> lower; // 2 when b1 >= 1
  int upper = 0;            // dimension
  std::vector<int> partition;
  std::optional<double> observed_constant;
  std::string note;
};

SyscatBounds syscat_bounds(const SimplicialComplex &x, std::optional<double> observed_constant = std::nullopt);

struct VerifyOptions {
  std::vector<CoverSpec> covers;
  double exact_timeout = 120.0;
  std::uint64_t seed = 0;
  int samples = 4000;
  int threads = 1;
};

struct Bounded {
  double value = std::numeric_limits<double>::infinity();
  Exactness exactness = Exactness::Exact;
};

struct VerificationReport {
  static constexpr int schema_version = 1;

  std::string mesh_name;
  std::string mesh_hash;
  int dimension = 0;
  long long b1 = 0;
  bool applicable = false;
  std::string note;

  double volume = 0.0;
  Bounded stsys1;
  Bounded sys1;
  std::optional<Bounded> sys_codim1; // Z/2 hypersurface systole (n in {2, 3})
  double sys_codim1_lower = 0.0;     // certified lower bound
  std::optional<double> sweep_min;
  std::optional<double> coarea_exact;
  std::optional<double> coarea_numeric;
  double alpha_stable = 0.0;  // stable norm of the L2-shortest homology class
  double alpha_l2 = 0.0;      // lambda_1(H_1, ||.||_2)
  double omega_l2 = 0.0;      // lambda_1(H^1, ||.||_2^*)
  IntVector alpha_class;
  IntVector omega_class;
  std::optional<double> gamma_prime;
  double ratio = 0.0;         // stsys1 * sys_{n-1} / vol

  std::vector<Assertion> assertions;
  SyscatBounds syscat;

  // Sweep profile of the omega circle map; not part of the JSON report.
  std::vector<double> profile_t, profile_volume;

  Verdict overall() const;
  double lambda_product() const { return alpha_l2 * omega_l2; }
};

/// Recomputes every assertion from the stored raw numbers (1e-9 slack).
std::vector<Assertion> evaluate_assertions(const VerificationReport &r);

VerificationReport verify_inequality12(const MetricComplex &mesh, const VerifyOptions &options = {},
                                       const std::string &name = "mesh");

/// 0 when every verdict holds, 2 when some are flagged, 1 on a violation.
int exit_code(const VerificationReport &r);

nlohmann::json report_json(const VerificationReport &r);
/// Parses a report and re-evaluates its assertions; throws std::runtime_error
/// when a stored verdict disagrees with the recomputed one.
VerificationReport read_report_json(const nlohmann::json &j);

void write_profile_csv(std::ostream &out, const std::vector<double> &t, const std::vector<double> &slice_volume);

struct PullbackReport {
  Bounded sys1_source, sys1_target;
  double sysh1_z2_source = 0.0, sysh1_z2_target = 0.0;
  double volume_source = 0.0, volume_target = 0.0;
  double volume_bound = 0.0; // k (1 + 10 eps)^n, k = top simplices of the source
  double repair_factor = 1.0;
  double tolerance = 0.0;
  std::vector<Assertion> assertions;
  Verdict overall() const;
};

/// Pulls gy back along the simplicial map f and compares systoles and volumes.
PullbackReport pullback_monotonicity_test(const SimplicialComplex &x, const std::vector<int> &f,
                                          const SimplicialComplex &y, const PLMetric &gy, double eps,
                                          double tolerance = 1e-6);

/// FNV-1a hash of the canonical mesh text.
std::string mesh_hash(const SimplicialComplex &x, const PLMetric &g);

} // namespace systolic
