// Command-line front end: one subcommand per run, deterministic artifacts.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "cantor/cli.hpp"
#include "cantor/config.hpp"

namespace {

// Tracks which flags were set explicitly so they override a --config file.
struct Flags {
  std::string config_file;
  std::string system;
  std::vector<double> params;
  std::string system_b;
  std::vector<double> params_b;
  cantor::RunConfig c;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_file, "JSON config file (flags override its keys)");
  sub->add_option("--system", f.system, "system family: middle-third|linear|perturbed|conjugated|poly");
  sub->add_option("--params", f.params, "family parameters")->delimiter(',');
  sub->add_option("--system-b", f.system_b, "second system family (rigidity)");
  sub->add_option("--params-b", f.params_b, "second system parameters")->delimiter(',');
  sub->add_option("--eps", f.c.eps, "conjugation amplitude for implied targets");
  sub->add_option("--depth", f.c.depth, "hierarchy / construction depth");
  sub->add_option("--est-depth", f.c.est_depth, "scaling estimation depth n");
  sub->add_option("--table-depth", f.c.table_depth, "dual cylinder depth m");
  sub->add_option("--depth-cap", f.c.depth_cap, "hard depth cap");
  sub->add_option("--tol", f.c.tol, "tolerance");
  sub->add_option("--seed", f.c.seed, "PRNG seed");
  sub->add_option("--precision-bits", f.c.precision_bits, "53, 128 or 256");
  sub->add_option("--grid-pow", f.c.grid_pow, "conjugacy grid has 2^p + 1 points");
  sub->add_option("--steps", f.c.steps, "simulation steps");
  sub->add_option("--n-max", f.c.n_max, "largest scenery index");
  sub->add_option("--past", f.c.past, "dual word / orbit prefix bits");
  sub->add_option("--gap-seed", f.c.gap_seed, "rigidity gap seed: affine|psi|bump");
  sub->add_option("--functional", f.c.functional,
                  "set functional: refdist|first_gap_left|first_gap_len|largest_gap_mid");
  sub->add_option("--coord", f.c.coord, "ratio coordinate: l|g|r");
  sub->add_option("--table-file", f.c.table_file, "persisted scaling table input");
  sub->add_option("--table-out", f.c.table_out, "persisted scaling table output");
  sub->add_option("--measures-out", f.c.measures_out, "cylinder-measure CSV output");
  sub->add_option("--out", f.c.out, "artifact path");
}

cantor::SystemSpec parse_system_flag(const std::string& family, const std::vector<double>& params,
                                     double eps) {
  cantor::SystemSpec spec;
  if (family == "conjugated") {
    // --system conjugated --params <base params...> --eps e, base family middle-third
    spec.family = "conjugated";
    spec.params = {eps};
    spec.base = std::make_shared<cantor::SystemSpec>();
    spec.base->family = "middle-third";
  } else {
    spec.family = family;
    spec.params = params;
  }
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperbolic Cantor sets: scaling functions, sceneries, rigidity"};
  app.require_subcommand(1);

  const std::vector<std::string> commands = {"validate", "levels",   "scaling",
                                             "ratioset", "dimension", "scenery",
                                             "converge", "rigidity",  "simulate"};
  Flags f;
  for (const auto& name : commands) add_common(app.add_subcommand(name), f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cantor::kExitUsage;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();

  cantor::RunConfig cfg;
  try {
    if (!f.config_file.empty()) cfg = cantor::load_config_file(f.config_file);
    // explicit flags override config-file keys
    auto set_if = [&](const char* flag, auto member) {
      if (sub->count(flag)) cfg.*member = f.c.*member;
    };
    set_if("--eps", &cantor::RunConfig::eps);
    set_if("--depth", &cantor::RunConfig::depth);
    set_if("--est-depth", &cantor::RunConfig::est_depth);
    set_if("--table-depth", &cantor::RunConfig::table_depth);
    set_if("--depth-cap", &cantor::RunConfig::depth_cap);
    set_if("--tol", &cantor::RunConfig::tol);
    set_if("--seed", &cantor::RunConfig::seed);
    set_if("--precision-bits", &cantor::RunConfig::precision_bits);
    set_if("--grid-pow", &cantor::RunConfig::grid_pow);
    set_if("--steps", &cantor::RunConfig::steps);
    set_if("--n-max", &cantor::RunConfig::n_max);
    set_if("--past", &cantor::RunConfig::past);
    set_if("--gap-seed", &cantor::RunConfig::gap_seed);
    set_if("--functional", &cantor::RunConfig::functional);
    set_if("--coord", &cantor::RunConfig::coord);
    set_if("--table-file", &cantor::RunConfig::table_file);
    set_if("--table-out", &cantor::RunConfig::table_out);
    set_if("--measures-out", &cantor::RunConfig::measures_out);
    set_if("--out", &cantor::RunConfig::out);
    if (sub->count("--system")) cfg.system = parse_system_flag(f.system, f.params, cfg.eps);
    if (sub->count("--system-b")) cfg.system_b = parse_system_flag(f.system_b, f.params_b, cfg.eps);
  } catch (const cantor::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cantor::kExitUsage;
  }

  return cantor::run_command_catching(cmd, cfg, std::cerr);
}
