#include "common.hpp"

#include "systolic/generators.hpp"
#include "systolic/lattice.hpp"
#include "systolic/verify.hpp"

#include <CLI11.hpp>

using namespace systolic;

namespace {

void write_to(const std::string &path, const MetricComplex &m) {
  if (path.empty() || path == "-") {
    write_mesh(std::cout, m.complex, m.metric);
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  write_mesh(f, m.complex, m.metric);
}

LatticeBasis named_lattice(const std::string &name) {
  if (name == "square") return integer_lattice(2);
  if (name == "cubic") return integer_lattice(3);
  if (name == "hex") return hexagonal_lattice();
  if (name == "fcc") return fcc_lattice();
  throw std::invalid_argument("unknown lattice " + name);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Verification of stsys1 * sys_{n-1}(Z/2) <= gamma'_b vol_n with its proof chain"};
  app.require_subcommand(1);

  std::string mesh, covers, json_out, profile_out;
  VerifyOptions vo;
  auto *run = app.add_subcommand("run", "Compute every quantity of the chain and judge each inequality");
  run->add_option("mesh", mesh)->required()->check(CLI::ExistingFile);
  run->add_option("--covers", covers, "Directory of edge colourings")->check(CLI::ExistingDirectory);
  run->add_option("--exact-timeout", vo.exact_timeout, "Seconds per class for the exact hypersurface search");
  run->add_option("--seed", vo.seed);
  run->add_option("--samples", vo.samples, "Sweep levels")->check(CLI::PositiveNumber);
  run->add_option("--json", json_out, "Report file (default stdout)");
  run->add_option("--profile", profile_out, "Sweep profile CSV");

  std::string report;
  auto *recheck = app.add_subcommand("check", "Re-evaluate a stored report");
  recheck->add_option("report", report)->required()->check(CLI::ExistingFile);

  auto *gen = app.add_subcommand("gen", "Generate example meshes");
  gen->require_subcommand(1);
  std::string out, lattice_file, lattice_name = "hex";
  int subdiv = 4, edges = 3, dim = 2, size = 4;
  bool normalize = false, unit_area = false;
  double scale = 1.0, length = 1.0;
  std::string a, b;

  auto *torus = gen->add_subcommand("torus", "Flat torus R^b / L");
  torus->add_option("--lattice", lattice_file, "Lattice file")->check(CLI::ExistingFile);
  torus->add_option("--named", lattice_name, "square, cubic, hex or fcc");
  torus->add_option("--subdiv", subdiv, "Subdivisions per basis vector (>= 3)");
  torus->add_flag("--normalize", normalize, "Rescale to covolume 1");
  torus->add_option("-o,--out", out);

  auto *rp2 = gen->add_subcommand("rp2", "Six-vertex projective plane");
  rp2->add_option("--scale", scale, "Edge length");
  rp2->add_flag("--unit-area", unit_area, "Choose the edge length giving area 1");
  rp2->add_option("-o,--out", out);

  auto *prod = gen->add_subcommand("product", "Product of two mesh files");
  prod->add_option("a", a)->required()->check(CLI::ExistingFile);
  prod->add_option("b", b)->required()->check(CLI::ExistingFile);
  prod->add_option("-o,--out", out);

  auto *circle = gen->add_subcommand("circle", "Polygon of a given length");
  circle->add_option("--edges", edges)->check(CLI::Range(3, 1 << 20));
  circle->add_option("--length", length);
  circle->add_option("-o,--out", out);

  auto *grid = gen->add_subcommand("grid", "Unit grid torus");
  grid->add_option("--dim", dim)->check(CLI::Range(2, 3));
  grid->add_option("--size", size)->check(CLI::Range(3, 1000));
  grid->add_option("-o,--out", out);

  CLI11_PARSE(app, argc, argv);

  return tools::guarded([&] {
    if (*run) {
      const auto m = read_mesh_file(mesh);
      vo.covers = tools::read_covers(covers, m.complex);
      vo.threads = tools::threads_from_env();
      const auto r = verify_inequality12(m, vo, std::filesystem::path(mesh).filename().string());
      tools::emit(report_json(r), json_out);
      if (!profile_out.empty()) {
        std::ofstream f(profile_out);
        write_profile_csv(f, r.profile_t, r.profile_volume);
      }
      std::cerr << "verdict: " << to_string(r.overall()) << '\n';
      return exit_code(r);
    }
    if (*recheck) {
      std::ifstream in(report);
      const auto r = read_report_json(tools::json::parse(in));
      std::cout << "verdict: " << to_string(r.overall()) << '\n';
      return exit_code(r);
    }
    if (*torus) {
      LatticeBasis l = named_lattice(lattice_name);
      if (!lattice_file.empty()) {
        std::ifstream in(lattice_file);
        l = read_lattice(in);
      }
      write_to(out, gen_flat_torus(l, subdiv, normalize).mesh);
    } else if (*rp2) {
      write_to(out, rp2_mesh(unit_area ? rp2_unit_area_edge() : scale));
    } else if (*prod) {
      const auto ma = read_mesh_file(a);
      const auto mb = read_mesh_file(b);
      write_to(out, product_complex(ma.complex, ma.metric, mb.complex, mb.metric));
    } else if (*circle) {
      write_to(out, circle_mesh(edges, length));
    } else {
      write_to(out, grid_torus(dim, size));
    }
    return 0;
  });
}
