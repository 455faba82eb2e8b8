#include "common.hpp"

#include <CLI11.hpp>

using namespace systolic;

int main(int argc, char **argv) {
  CLI::App app{"One-dimensional systoles of a piecewise-flat mesh"};
  std::string file, invariant = "sysh1", ring = "z", covers, out;
  bool complete = false;
  app.add_option("mesh", file)->required()->check(CLI::ExistingFile);
  app.add_option("--invariant", invariant)->check(CLI::IsMember({"sysh1", "pisys1", "stsys1", "sys1"}));
  app.add_option("--ring", ring, "Coefficients for sysh1")->check(CLI::IsMember({"z", "z2"}));
  app.add_option("--covers", covers, "Directory of edge colourings")->check(CLI::ExistingDirectory);
  app.add_flag("--complete", complete, "The listed covers detect the whole fundamental group");
  app.add_option("--json", out, "Write JSON here instead of stdout");
  CLI11_PARSE(app, argc, argv);

  return tools::guarded([&] {
    const auto m = read_mesh_file(file);
    require_valid(m.complex, m.metric, false);
    const auto cs = tools::read_covers(covers, m.complex);
    SystoleValue v;
    if (invariant == "sysh1") v = sysh1(m.complex, m.metric, ring == "z2" ? Ring::Mod2 : Ring::Integer);
    else if (invariant == "pisys1") v = pisys1_upper(m.complex, m.metric, cs, complete);
    else if (invariant == "stsys1") v = stsys1(m.complex, m.metric);
    else v = sys1_aggregate(m.complex, m.metric, cs, complete);
    auto j = tools::systole_json(m.complex, v);
    j["invariant"] = invariant;
    if (invariant == "sysh1") j["ring"] = ring;
    tools::emit(j, out);
    return 0;
  });
}
