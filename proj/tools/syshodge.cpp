#include "common.hpp"

#include "systolic/hodge.hpp"
#include "systolic/verify.hpp"

#include <CLI11.hpp>

using namespace systolic;

int main(int argc, char **argv) {
  CLI::App app{"Harmonic forms, circle maps and level-set sweeps"};
  std::string file, cls = "auto-shortest", profile, out;
  int samples = 4000;
  app.add_option("mesh", file)->required()->check(CLI::ExistingFile);
  app.add_option("--class", cls, "Cocycle file ('edge u v value' lines) or auto-shortest");
  app.add_option("--samples", samples, "Number of sampled levels")->check(CLI::PositiveNumber);
  app.add_option("--emit-profile", profile, "CSV file with columns t, slice_volume");
  app.add_option("--json", out, "Write JSON here instead of stdout");
  CLI11_PARSE(app, argc, argv);

  return tools::guarded([&] {
    const auto m = read_mesh_file(file);
    require_valid(m.complex, m.metric, true);
    const auto &x = m.complex;
    const auto &g = m.metric;
    Eigen::VectorXd cocycle;
    tools::json j;
    const auto p = period_gram(x, g);
    if (cls == "auto-shortest") {
      const auto c = shortest_class(p);
      cocycle = class_cocycle(p.basis, c);
      j["class"] = std::vector<long long>(c.data(), c.data() + c.size());
    } else {
      std::ifstream in(cls);
      if (!in) throw std::runtime_error("cannot read " + cls);
      cocycle = tools::read_cocycle(in, x);
      j["class"] = cls;
    }
    const auto chain = lemma_chain(x, g, cocycle, samples);
    const auto eta = harmonic_representative(x, g, cocycle).form;
    j["l2_norm"] = chain.l2_norm;
    j["comass"] = comass(eta);
    j["volume"] = chain.volume;
    j["coarea_exact"] = chain.coarea;
    j["coarea_numeric"] = chain.sweep.coarea_numeric;
    j["min_slice"] = chain.min_slice;
    j["min_slice_level"] = chain.sweep.min_t;
    j["l2_times_sqrt_volume"] = chain.l2_times_sqrt_volume;
    j["slice_below_coarea"] = chain.slice_below_coarea;
    j["coarea_below_l2"] = chain.coarea_below_l2;
    std::vector<std::vector<double>> gram(p.cohomology.rows(), std::vector<double>(p.cohomology.cols()));
    for (Eigen::Index r = 0; r < p.cohomology.rows(); ++r)
      for (Eigen::Index c = 0; c < p.cohomology.cols(); ++c) gram[r][c] = p.cohomology(r, c);
    j["period_gram"] = gram;
    tools::emit(j, out);
    if (!profile.empty()) {
      std::ofstream f(profile);
      write_profile_csv(f, chain.sweep.t, chain.sweep.slice_volume);
    }
    return chain.slice_below_coarea && chain.coarea_below_l2 ? 0 : 1;
  });
}
