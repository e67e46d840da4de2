#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "rotsym/common.hpp"
#include "rotsym/experiments.hpp"

int main(int argc, char** argv) {
  rotsym::configure_threads();
  CLI::App app{"Rotational symmetry experiments"};
  app.require_subcommand(1);

  std::string name, config, out = "runs", dir;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "run a registered experiment");
  run->add_option("name", name, "experiment name")->required();
  run->add_option("--config", config, "flat JSON config or a previous manifest.json");
  run->add_option("--out", out, "base directory for artifacts");
  auto* seed_opt = run->add_option("--seed", seed, "random seed");

  auto* rep = app.add_subcommand("report", "summarize an artifact directory");
  rep->add_option("dir", dir, "artifact directory")->required();

  app.add_subcommand("list", "list registered experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (app.got_subcommand("list")) {
    for (const auto& d : rotsym::experiment_registry())
      std::cout << d.name << "  " << d.description << "\n";
    return 0;
  }
  if (run->parsed()) {
    rotsym::RunOptions opt;
    opt.config_path = config;
    opt.out_base = out;
    if (*seed_opt) opt.seed = seed;
    rotsym::RunResult r = rotsym::run_experiment(name, opt);
    if (r.code == 1) {
      std::cerr << "error: " << r.message << "\n";
      return 1;
    }
    std::cout << r.dir << "\n";
    std::cout << rotsym::report(r.dir).text;
    return r.code;
  }
  rotsym::ReportResult r = rotsym::report(dir);
  if (r.code == 1) {
    std::cerr << "error: " << r.text;
    return 1;
  }
  std::cout << r.text;
  std::cout << r.summary.dump(2) << "\n";
  return r.code;
}
