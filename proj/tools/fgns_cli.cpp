// Command-line front end: fgns <subcommand> [--config PATH] [flags].
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fgns/config.hpp"
#include "fgns/errors.hpp"
#include "fgns/experiments.hpp"
#include "fgns/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral lab for the fractional Navier-Stokes equations"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::string eps_list;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  struct Flag {
    const char* key;
    std::string value;
  };
  std::vector<Flag> flags{{"grid.N", {}},       {"model.alpha", {}}, {"model.beta", {}},
                          {"lorentz.p", {}},    {"lorentz.q", {}},   {"horizon.T", {}}};

  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (u64)");
  for (auto& f : flags) app.add_option(std::string("--") + f.key, f.value, std::string("override ") + f.key);
  app.add_option("--eps", eps_list, "comma-separated mollifier radii");
  app.add_option("--set", overrides, "extra key=value override (repeatable)");

  for (const auto& name : fgns::subcommand_names()) app.add_subcommand(name, "run " + name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fgns::kExitConfig;
  }

  fgns::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) fgns::load_config_file(config_path, cfg);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw fgns::ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& f : flags) {
      if (!f.value.empty()) cfg.set(f.key, f.value);
    }
    if (!out_dir.empty()) cfg.set("out", out_dir);
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (!eps_list.empty()) cfg.set("eps", eps_list);
    fgns::apply_thread_env();
  } catch (const fgns::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return fgns::kExitConfig;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  const fgns::RunResult res = fgns::run_experiment(cfg, sub);
  if (res.exit_code != 0) {
    std::cerr << sub << ": " << res.message << '\n';
  } else {
    std::cout << sub << ": wrote";
    for (const auto& a : res.artifacts) std::cout << ' ' << a;
    std::cout << " manifest.json to " << cfg.out << '\n';
  }
  return res.exit_code;
}
