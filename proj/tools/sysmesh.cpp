#include "common.hpp"

#include "systolic/homology.hpp"

#include <CLI11.hpp>

using namespace systolic;

int main(int argc, char **argv) {
  CLI::App app{"Simplicial mesh checks, homology, covers and products"};
  app.require_subcommand(1);

  std::string file, second, out, ring = "z";
  auto *check = app.add_subcommand("check", "Validate structure and metric");
  check->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto *hom = app.add_subcommand("homology", "Homology groups in every degree");
  hom->add_option("file", file)->required()->check(CLI::ExistingFile);
  hom->add_option("--ring", ring, "z or z2")->check(CLI::IsMember({"z", "z2"}));

  auto *cover = app.add_subcommand("cover", "Build the cover given by an edge colouring");
  cover->add_option("file", file)->required()->check(CLI::ExistingFile);
  cover->add_option("coloring", second)->required()->check(CLI::ExistingFile);
  cover->add_option("-o,--out", out, "Output mesh (default stdout)");

  auto *prod = app.add_subcommand("product", "Triangulated product of two meshes");
  prod->add_option("a", file)->required()->check(CLI::ExistingFile);
  prod->add_option("b", second)->required()->check(CLI::ExistingFile);
  prod->add_option("-o,--out", out, "Output mesh (default stdout)");

  CLI11_PARSE(app, argc, argv);

  auto write = [&](const MetricComplex &m) {
    if (out.empty()) {
      write_mesh(std::cout, m.complex, m.metric);
    } else {
      std::ofstream f(out);
      write_mesh(f, m.complex, m.metric);
    }
  };

  return tools::guarded([&] {
    const auto m = read_mesh_file(file);
    if (*check) {
      const auto d = validate(m.complex, m.metric);
      tools::json j{{"dimension", m.complex.dimension()},
                    {"vertices", m.complex.num_vertices()},
                    {"top_simplices", m.complex.count(m.complex.dimension())},
                    {"connected", d.connected},
                    {"closed_pseudomanifold", d.pseudomanifold},
                    {"orientable", d.orientable},
                    {"metric_valid", d.metric_valid},
                    {"euler_characteristic", m.complex.euler_characteristic()},
                    {"issues", d.issues}};
      if (d.metric_valid) j["volume"] = volume(m.complex, m.metric);
      tools::emit(j, "");
      return d.ok(true) ? 0 : 1;
    }
    if (*hom) {
      const auto groups = homology_groups(m.complex, ring == "z2" ? Ring::Mod2 : Ring::Integer);
      tools::json j = tools::json::array();
      for (std::size_t k = 0; k < groups.size(); ++k)
        j.push_back({{"degree", k}, {"betti", groups[k].betti}, {"torsion", groups[k].torsion}});
      tools::emit({{"ring", ring}, {"groups", j}}, "");
      return 0;
    }
    if (*cover) {
      std::ifstream in(second);
      const auto colouring = read_coloring(in, m.complex);
      const auto c = build_cover(m.complex, m.metric, colouring);
      std::cerr << "cover: " << c.mesh.complex.num_vertices() << " vertices, " << c.components << " component(s)\n";
      write(c.mesh);
      return 0;
    }
    const auto b = read_mesh_file(second);
    write(product_complex(m.complex, m.metric, b.complex, b.metric));
    return 0;
  });
}
