#include "common.hpp"

#include "systolic/lattice.hpp"

#include <CLI11.hpp>

using namespace systolic;

int main(int argc, char **argv) {
  CLI::App app{"Lattice invariants: shortest vectors, duals, Berge-Martinet products"};
  app.require_subcommand(1);

  std::string file;
  auto *info = app.add_subcommand("info", "Invariants of the lattice in a file");
  info->add_option("file", file, "Lattice file ('lattice b' then b rows)")->required()->check(CLI::ExistingFile);

  int dim = 2;
  long long budget = 100000;
  std::uint64_t seed = 1;
  std::string out;
  auto *search = app.add_subcommand("search", "Local search for dual-critical lattices");
  search->add_option("--dim", dim, "Rank b in [1, 8]")->required();
  search->add_option("--budget", budget, "Number of proposal steps");
  search->add_option("--seed", seed, "Random seed");
  search->add_option("--out", out, "Write the best lattice to this file");

  CLI11_PARSE(app, argc, argv);

  return tools::guarded([&] {
    if (*info) {
      std::ifstream in(file);
      const auto l = read_lattice(in);
      const auto d = dual_lattice(l);
      tools::json j{{"rank", l.rank()},
                    {"covolume", l.covolume()},
                    {"lambda1", lambda1(l)},
                    {"dual_lambda1", lambda1(d)},
                    {"berge_martinet_product", berge_martinet_product(l)},
                    {"hermite_invariant", hermite_invariant(l)},
                    {"isodual", is_isodual(l)}};
      const auto g = gamma_prime_table(l.rank());
      j["gamma_prime"] = g ? tools::json(*g) : tools::json(nullptr);
      tools::emit(j, "");
      return 0;
    }
    const auto r = dual_critical_search(dim, budget, seed);
    tools::json j{{"rank", dim},       {"budget", budget},       {"seed", seed},
                  {"product", r.product}, {"restarts", r.restarts}, {"accepted_moves", r.accepted_moves}};
    const auto g = gamma_prime_table(dim);
    j["gamma_prime"] = g ? tools::json(*g) : tools::json(nullptr);
    std::ostringstream basis;
    write_lattice(basis, r.lattice);
    j["lattice"] = basis.str();
    tools::emit(j, "");
    if (!out.empty()) {
      std::ofstream f(out);
      write_lattice(f, r.lattice);
    }
    return 0;
  });
}
