#include "common.hpp"

#include "systolic/z2_hypersurface.hpp"

#include <CLI11.hpp>

using namespace systolic;

int main(int argc, char **argv) {
  CLI::App app{"Codimension-1 Z/2 systole by minimum facet cycles"};
  std::string file, mode = "exact", out;
  Z2Options o;
  app.add_option("mesh", file)->required()->check(CLI::ExistingFile);
  app.add_option("--mode", mode)->check(CLI::IsMember({"exact", "heuristic"}));
  app.add_option("--timeout", o.timeout_seconds, "Seconds per class in exact mode");
  app.add_option("--seed", o.seed, "Seed for heuristic restarts");
  app.add_option("--json", out, "Write JSON here instead of stdout");
  CLI11_PARSE(app, argc, argv);
  o.mode = mode == "exact" ? Z2Mode::Exact : Z2Mode::Heuristic;
  o.threads = tools::threads_from_env();

  return tools::guarded([&] {
    const auto m = read_mesh_file(file);
    require_valid(m.complex, m.metric, true);
    const auto r = sys_codim1_z2(m.complex, m.metric, o);
    auto j = tools::systole_json(m.complex, r.systole);
    j["mode"] = mode;
    j["optimal"] = r.systole.exactness == Exactness::Exact;
    j["lower_bound"] = tools::number(r.lower_bound);
    j["timed_out"] = r.timed_out;
    tools::json classes = tools::json::array();
    for (const auto &c : r.classes) {
      std::vector<int> bits;
      for (std::size_t i = 0; i < c.cls.size(); ++i) bits.push_back(c.cls.get(i));
      tools::json faces = tools::json::array();
      for (auto f : c.witness.support()) faces.push_back(m.complex.simplex(m.complex.dimension() - 1, static_cast<int>(f)));
      classes.push_back({{"class", bits},
                         {"value", tools::number(c.upper)},
                         {"lower_bound", tools::number(c.lower)},
                         {"optimal", c.optimal},
                         {"pruned", c.pruned},
                         {"timed_out", c.timed_out},
                         {"witness_faces", faces}});
    }
    j["classes"] = classes;
    tools::emit(j, out);
    if (r.timed_out) {
      std::cerr << "error: exact search timed out; bounds [" << r.lower_bound << ", " << r.systole.value << "]\n";
      return 1;
    }
    return 0;
  });
}
