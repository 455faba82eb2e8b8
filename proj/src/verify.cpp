#include "systolic/verify.hpp"

#include "systolic/hodge.hpp"
#include "systolic/lattice.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace systolic {

using nlohmann::json;

const char *to_string(Verdict v) {
  switch (v) {
  case Verdict::Holds: return "holds";
  case Verdict::Flagged: return "holds-with-flagged-bounds";
  case Verdict::Violated: return "violated";
  }
  return "?";
}

namespace {

constexpr double kSlack = 1e-9;

Verdict judge(const Assertion &a) {
  const bool ok = a.lhs <= a.rhs + kSlack * std::max(1.0, std::abs(a.rhs));
  if (ok) return a.inputs_exact ? Verdict::Holds : Verdict::Flagged;
  return a.hard && a.inputs_exact ? Verdict::Violated : Verdict::Flagged;
}

void add(std::vector<Assertion> &out, std::string name, double lhs, double rhs, bool hard, bool exact = true) {
  Assertion a{std::move(name), lhs, rhs, hard, exact, Verdict::Holds};
  a.verdict = judge(a);
  out.push_back(std::move(a));
}

Verdict combine(const std::vector<Assertion> &as) {
  Verdict v = Verdict::Holds;
  for (const auto &a : as) {
    if (a.verdict == Verdict::Violated) return Verdict::Violated;
    if (a.verdict == Verdict::Flagged) v = Verdict::Flagged;
  }
  return v;
}

Bounded bounded(const SystoleValue &s) { return {s.value, s.exactness}; }

json number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

double number(const json &j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::runtime_error("bad number: " + s);
  }
  return j.get<double>();
}

Exactness exactness_from(const std::string &s) {
  if (s == to_string(Exactness::Exact)) return Exactness::Exact;
  if (s == to_string(Exactness::UpperBound)) return Exactness::UpperBound;
  if (s == to_string(Exactness::LowerBound)) return Exactness::LowerBound;
  throw std::runtime_error("bad exactness flag: " + s);
}

json bounded_json(const Bounded &b) { return {{"value", number(b.value)}, {"exactness", to_string(b.exactness)}}; }

Bounded bounded_from(const json &j) { return {number(j.at("value")), exactness_from(j.at("exactness").get<std::string>())}; }

json int_vector(const IntVector &v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

IntVector int_vector_from(const json &j) {
  IntVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<long long>();
  return v;
}

} // namespace

Verdict VerificationReport::overall() const { return combine(assertions); }
Verdict PullbackReport::overall() const { return combine(assertions); }

int exit_code(const VerificationReport &r) {
  switch (r.overall()) {
  case Verdict::Holds: return 0;
  case Verdict::Flagged: return 2;
  case Verdict::Violated: return 1;
  }
  return 1;
}

SyscatBounds syscat_bounds(const SimplicialComplex &x, std::optional<double> observed_constant) {
  SyscatBounds s;
  const int n = x.dimension();
  s.upper = n;
  const int b1 = first_homology(x).rank;
  if (b1 >= 1 && n >= 2) {
    s.lower = 2;
    s.partition = {1, n - 1};
    s.observed_constant = observed_constant;
    s.note = "b1 >= 1: stsys1 * sys_{n-1}(Z/2) <= gamma'_b vol_n for every metric";
  } else if (b1 == 0) {
    s.note = "first Betti number is zero; no lower bound from this criterion";
  } else {
    s.note = "dimension below 2";
  }
  return s;
}

std::vector<Assertion> evaluate_assertions(const VerificationReport &r) {
  std::vector<Assertion> out;
  if (!r.applicable) return out;
  const double st = r.stsys1.value;
  const bool st_exact = r.stsys1.exactness == Exactness::Exact;
  const double root_vol = std::sqrt(r.volume);
  add(out, "stsys1 <= stable norm of alpha", st, r.alpha_stable, true, st_exact);
  add(out, "sys1 <= stsys1", r.sys1.value, st, true);
  add(out, "stable norm of alpha <= |alpha|_2 vol^(1/2)", r.alpha_stable, r.alpha_l2 * root_vol, false);
  if (r.sweep_min) {
    add(out, "sweep min <= coarea", *r.sweep_min, *r.coarea_numeric, true);
    add(out, "coarea <= |omega|_2* vol^(1/2)", *r.coarea_exact, r.omega_l2 * root_vol, true);
    add(out, "stsys1 * sweep min <= lambda product * vol", st * *r.sweep_min, r.lambda_product() * r.volume, false,
        st_exact);
  }
  if (r.sys_codim1 && r.sweep_min && r.sys_codim1->exactness == Exactness::Exact)
    add(out, "sys_{n-1}(Z/2) <= sweep min", r.sys_codim1->value, *r.sweep_min, false);
  if (r.gamma_prime) {
    add(out, "lambda product <= gamma'_b", r.lambda_product(), *r.gamma_prime, true);
    if (r.sys_codim1)
      add(out, "ratio <= gamma'_b", r.ratio, *r.gamma_prime, false,
          st_exact && r.sys_codim1->exactness == Exactness::Exact);
  }
  return out;
}

std::string mesh_hash(const SimplicialComplex &x, const PLMetric &g) {
  std::ostringstream text;
  write_mesh(text, x, g);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text.str()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << h;
  return out.str();
}

VerificationReport verify_inequality12(const MetricComplex &mesh, const VerifyOptions &o, const std::string &name) {
  const auto &x = mesh.complex;
  const auto &g = mesh.metric;
  require_valid(x, g, true);
  VerificationReport r;
  r.mesh_name = name;
  r.mesh_hash = mesh_hash(x, g);
  r.dimension = x.dimension();
  r.volume = volume(x, g);

  const auto h = first_homology(x);
  r.b1 = h.rank;
  if (r.b1 == 0) {
    r.note = "first Betti number is zero; the inequality does not apply";
    r.syscat = syscat_bounds(x);
    return r;
  }
  r.applicable = true;

  r.stsys1 = bounded(stsys1(x, g));
  r.sys1 = bounded(sys1_aggregate(x, g, o.covers));

  const auto p = period_gram(x, g);
  r.omega_class = shortest_class(p);
  r.omega_l2 = std::sqrt(r.omega_class.cast<double>().dot(p.cohomology * r.omega_class.cast<double>()));
  const auto alpha = shortest_vector(p.homology);
  r.alpha_class = alpha.coefficients;
  r.alpha_l2 = std::sqrt(alpha.norm2);
  r.alpha_stable = stable_norm(x, g, p.basis, r.alpha_class).value;
  r.gamma_prime = gamma_prime_table(static_cast<int>(r.b1));

  const int n = r.dimension;
  if (n == 2 || n == 3) {
    const auto f = circle_map(x, g, class_cocycle(p.basis, r.omega_class));
    const auto sw = sweep(x, g, f, o.samples);
    r.sweep_min = sw.min_volume;
    r.coarea_exact = sw.coarea_exact;
    r.coarea_numeric = sw.coarea_numeric;
    r.profile_t = sw.t;
    r.profile_volume = sw.slice_volume;

    Z2Options zo;
    zo.timeout_seconds = o.exact_timeout;
    zo.seed = o.seed;
    zo.threads = o.threads;
    const auto z = sys_codim1_z2(x, g, zo);
    Bounded b = bounded(z.systole);
    r.sys_codim1_lower = z.lower_bound;
    if (z.timed_out) {
      b.value = std::min(b.value, sw.min_volume);
      b.exactness = Exactness::UpperBound;
      r.note = "exact hypersurface search timed out; sweep bound used";
    }
    r.sys_codim1 = b;
    r.ratio = r.stsys1.value * b.value / r.volume;
  } else {
    r.note = "hypersurface systole and slicing need n in {2, 3}; report lists lattice quantities only";
  }
  r.assertions = evaluate_assertions(r);
  r.syscat = syscat_bounds(x, r.sys_codim1 ? std::optional<double>(r.ratio) : std::nullopt);
  return r;
}

json report_json(const VerificationReport &r) {
  json j;
  j["schema"] = "systolic-verification-report";
  j["version"] = VerificationReport::schema_version;
  j["mesh"] = {{"name", r.mesh_name}, {"hash", r.mesh_hash}, {"dimension", r.dimension}};
  j["b1"] = r.b1;
  j["applicable"] = r.applicable;
  j["note"] = r.note;
  j["volume"] = r.volume;
  j["stsys1"] = bounded_json(r.stsys1);
  j["sys1"] = bounded_json(r.sys1);
  if (r.sys_codim1) {
    j["sys_codim1_z2"] = bounded_json(*r.sys_codim1);
    j["sys_codim1_z2"]["lower_bound"] = number(r.sys_codim1_lower);
  } else {
    j["sys_codim1_z2"] = nullptr;
  }
  if (r.sweep_min)
    j["sweep"] = {{"min", *r.sweep_min}, {"coarea_exact", *r.coarea_exact}, {"coarea_numeric", *r.coarea_numeric}};
  else
    j["sweep"] = nullptr;
  j["alpha"] = {{"class", int_vector(r.alpha_class)}, {"stable_norm", r.alpha_stable}, {"l2", r.alpha_l2}};
  j["omega"] = {{"class", int_vector(r.omega_class)}, {"l2", r.omega_l2}};
  j["lambda_product"] = r.lambda_product();
  j["gamma_prime"] = r.gamma_prime ? json(*r.gamma_prime) : json(nullptr);
  j["ratio"] = number(r.ratio);
  json as = json::array();
  for (const auto &a : r.assertions)
    as.push_back({{"name", a.name},
                  {"lhs", number(a.lhs)},
                  {"rhs", number(a.rhs)},
                  {"hard", a.hard},
                  {"inputs_exact", a.inputs_exact},
                  {"verdict", to_string(a.verdict)}});
  j["assertions"] = as;
  j["syscat"] = {{"lower", r.syscat.lower ? json(*r.syscat.lower) : json(nullptr)},
                 {"upper", r.syscat.upper},
                 {"partition", r.syscat.partition},
                 {"observed_constant",
                  r.syscat.observed_constant ? number(*r.syscat.observed_constant) : json(nullptr)},
                 {"note", r.syscat.note}};
  j["verdict"] = to_string(r.overall());
  return j;
}

VerificationReport read_report_json(const json &j) {
  if (j.value("schema", "") != "systolic-verification-report") throw std::runtime_error("not a verification report");
  if (j.at("version").get<int>() != VerificationReport::schema_version)
    throw std::runtime_error("unsupported report version");
  VerificationReport r;
  r.mesh_name = j.at("mesh").at("name").get<std::string>();
  r.mesh_hash = j.at("mesh").at("hash").get<std::string>();
  r.dimension = j.at("mesh").at("dimension").get<int>();
  r.b1 = j.at("b1").get<long long>();
  r.applicable = j.at("applicable").get<bool>();
  r.note = j.at("note").get<std::string>();
  r.volume = j.at("volume").get<double>();
  r.stsys1 = bounded_from(j.at("stsys1"));
  r.sys1 = bounded_from(j.at("sys1"));
  if (!j.at("sys_codim1_z2").is_null()) {
    r.sys_codim1 = bounded_from(j["sys_codim1_z2"]);
    r.sys_codim1_lower = number(j["sys_codim1_z2"].at("lower_bound"));
  }
  if (!j.at("sweep").is_null()) {
    r.sweep_min = j["sweep"].at("min").get<double>();
    r.coarea_exact = j["sweep"].at("coarea_exact").get<double>();
    r.coarea_numeric = j["sweep"].at("coarea_numeric").get<double>();
  }
  r.alpha_class = int_vector_from(j.at("alpha").at("class"));
  r.alpha_stable = j["alpha"].at("stable_norm").get<double>();
  r.alpha_l2 = j["alpha"].at("l2").get<double>();
  r.omega_class = int_vector_from(j.at("omega").at("class"));
  r.omega_l2 = j["omega"].at("l2").get<double>();
  if (!j.at("gamma_prime").is_null()) r.gamma_prime = j["gamma_prime"].get<double>();
  r.ratio = number(j.at("ratio"));
  const auto &sc = j.at("syscat");
  if (!sc.at("lower").is_null()) r.syscat.lower = sc["lower"].get<int>();
  r.syscat.upper = sc.at("upper").get<int>();
  r.syscat.partition = sc.at("partition").get<std::vector<int>>();
  if (!sc.at("observed_constant").is_null()) r.syscat.observed_constant = number(sc["observed_constant"]);
  r.syscat.note = sc.at("note").get<std::string>();

  if (r.sys_codim1) {
    const double ratio = r.stsys1.value * r.sys_codim1->value / r.volume;
    if (std::abs(ratio - r.ratio) > 1e-12 * std::max(1.0, std::abs(ratio)))
      throw std::runtime_error("stored ratio does not match stored systoles");
  }
  r.assertions = evaluate_assertions(r);
  const auto &stored = j.at("assertions");
  if (stored.size() != r.assertions.size()) throw std::runtime_error("stored assertions do not match recomputation");
  for (std::size_t i = 0; i < stored.size(); ++i)
    if (stored[i].at("name").get<std::string>() != r.assertions[i].name ||
        stored[i].at("verdict").get<std::string>() != to_string(r.assertions[i].verdict))
      throw std::runtime_error("stored verdict disagrees with recomputation: " + r.assertions[i].name);
  return r;
}

void write_profile_csv(std::ostream &out, const std::vector<double> &t, const std::vector<double> &slice_volume) {
  out << "t,slice_volume\n";
  char buf[64];
  auto put = [&](double v) { out.write(buf, std::to_chars(buf, buf + sizeof buf, v).ptr - buf); };
  for (std::size_t i = 0; i < t.size(); ++i) {
    put(t[i]);
    out << ',';
    put(slice_volume[i]);
    out << '\n';
  }
}

PullbackReport pullback_monotonicity_test(const SimplicialComplex &x, const std::vector<int> &f,
                                          const SimplicialComplex &y, const PLMetric &gy, double eps,
                                          double tolerance) {
  const auto pb = pullback_metric(x, f, y, gy, eps);
  PullbackReport r;
  r.repair_factor = pb.repair_factor;
  r.tolerance = tolerance;
  r.sys1_source = bounded(sys1_aggregate(x, pb.metric, {}));
  r.sys1_target = bounded(sys1_aggregate(y, gy, {}));
  r.sysh1_z2_source = sysh1(x, pb.metric, Ring::Mod2).value;
  r.sysh1_z2_target = sysh1(y, gy, Ring::Mod2).value;
  r.volume_source = volume(x, pb.metric);
  r.volume_target = volume(y, gy);
  const int n = x.dimension();
  r.volume_bound = static_cast<double>(x.count(n)) * std::pow(1.0 + 10.0 * eps, n);
  const bool exact = r.sys1_source.exactness == Exactness::Exact && r.sys1_target.exactness == Exactness::Exact;
  add(r.assertions, "sys1(target) - tol <= sys1(pullback)", r.sys1_target.value - tolerance, r.sys1_source.value,
      false, exact);
  add(r.assertions, "sysh1_Z2(target) - tol <= sysh1_Z2(pullback)", r.sysh1_z2_target - tolerance,
      r.sysh1_z2_source, false);
  add(r.assertions, "vol(pullback) / vol(target) <= simplex-count bound", r.volume_source / r.volume_target,
      r.volume_bound, true);
  return r;
}

} // namespace systolic
