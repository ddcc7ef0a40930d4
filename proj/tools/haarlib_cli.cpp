#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <map>

#include "haarlib/runner.hpp"

namespace {

// Values given on the command line; unset ones leave the config alone.
struct Flags {
  std::optional<std::string> config, group, instance, output, seed;
  std::optional<int> workers, d, radius, base_points, max_refinements, translates;
  std::optional<double> rel_tol, invariance_tol, modular_tol, weil_tol;
  std::optional<long> mc_samples;
};

void add_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config, "key = value config file");
  cmd.add_option("--seed", f.seed, "64-bit seed (default: HAARLIB_SEED or 0)");
  cmd.add_option("--workers", f.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd.add_option("--output", f.output, "write the report here instead of stdout");
  cmd.add_option("--base-points", f.base_points, "Gauss-Legendre points per axis");
  cmd.add_option("--max-refinements", f.max_refinements, "dyadic refinement levels");
  cmd.add_option("--rel-tol", f.rel_tol, "quadrature relative tolerance");
  cmd.add_option("--mc-samples", f.mc_samples, "Monte Carlo samples");
  cmd.add_option("--translates", f.translates, "random translates per invariance check");
  cmd.add_option("--invariance-tol", f.invariance_tol, "invariance tolerance");
  cmd.add_option("--modular-tol", f.modular_tol, "modular function tolerance");
  cmd.add_option("--weil-tol", f.weil_tol, "quotient formula tolerance");
}

void apply(const Flags& f, haarlib::RunConfig& cfg) {
  auto& s = cfg.suite;
  if (f.group) cfg.group = f.group;
  if (f.instance) cfg.instance = f.instance;
  if (f.output) cfg.output = f.output;
  if (f.d) cfg.d = f.d;
  if (f.radius) cfg.radius = f.radius;
  if (f.seed) s.seed = haarlib::parse_seed(*f.seed);
  if (f.workers) s.workers = *f.workers;
  if (f.translates) s.translates = *f.translates;
  if (f.base_points) s.quadrature.base_points = f.base_points;
  if (f.max_refinements) s.quadrature.max_refinements = f.max_refinements;
  if (f.rel_tol) s.quadrature.rel_tol = f.rel_tol;
  if (f.mc_samples) s.quadrature.mc_samples = f.mc_samples;
  if (f.invariance_tol) s.invariance_tol = f.invariance_tol;
  if (f.modular_tol) s.modular_tol = f.modular_tol;
  if (f.weil_tol) s.weil_tol = f.weil_tol;
}

const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> d{
      {"catalog", "invariance, modular and compactness checks per catalog group"},
      {"invariance", "left and right invariance of the Haar integrals"},
      {"modular", "modular function estimates against the closed form"},
      {"weil", "quotient integration formula on the named instances"},
      {"lattice", "covolumes, periodization and lattice unimodularity"},
      {"tree", "horospherical modular function and ball automorphism orders"},
      {"all", "every suite"},
  };
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Haar measure property checks"};
  app.require_subcommand(1, 1);
  Flags flags;
  for (const auto& name : haarlib::commands()) {
    CLI::App* cmd = app.add_subcommand(name, descriptions().count(name) ? descriptions().at(name) : "");
    add_flags(*cmd, flags);
    if (name == "catalog" || name == "invariance" || name == "modular" || name == "all")
      cmd->add_option("--group", flags.group, "r<n>, rstar, gl<n>, sl2, so2 or p");
    if (name == "weil" || name == "all")
      cmd->add_option("--instance", flags.instance, "rn_zn, sl2_so2, sl2_p_negative or sl2_n_plane");
    if (name == "tree" || name == "all") {
      cmd->add_option("--d", flags.d, "tree degree");
      cmd->add_option("--R", flags.radius, "ball radius");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    haarlib::RunConfig cfg = haarlib::default_config(std::getenv("HAARLIB_SEED"));
    cfg.command = app.get_subcommands().front()->get_name();
    if (flags.config) haarlib::apply_config_file(cfg, *flags.config);
    apply(flags, cfg);
    return haarlib::run(cfg, std::cout);
  } catch (const haarlib::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
