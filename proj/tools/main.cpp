#include <CLI11.hpp>

#include <iostream>

#include "enzlogic/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Enzymatic logic gate simulator and sequential-mapping checker"};
  app.require_subcommand(1);

  enzlogic::RunOptions opts;
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opts.configs, "Scenario YAML file (repeatable)")
                  ->check(CLI::ExistingFile);
    if (needs_config) c->required();
    sub->add_option("--out", opts.out, "Output file, or directory when several configs are given");
    sub->add_option("--jobs", opts.jobs, "Scenarios run concurrently")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Override the random waveform seed");
  };

  auto* sim = app.add_subcommand("simulate", "Integrate a scenario and write the trace as CSV");
  common(sim, true);
  auto* tt = app.add_subcommand("truth-table", "Equilibrium truth table against the Boolean oracle");
  common(tt, true);
  auto* sm = app.add_subcommand("check-seqmap", "Simulate and check sequential mapping");
  common(sm, true);
  auto* bd = app.add_subcommand("bounds", "Settling-time bounds for a NOT gate");
  common(bd, true);
  auto* syn = app.add_subcommand("synth", "Synthesize an expression into a netlist dump");
  common(syn, false);
  syn->add_option("--expr", opts.expr, "Expression, e.g. AND(a,NOT(b))");
  syn->add_option("--style", opts.style, "direct or nand_only");
  syn->add_option("--vars", opts.vars, "Input order (defaults to sorted variables)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : enzlogic::exit_config;
  }

  for (auto* sub : app.get_subcommands()) {
    opts.command = sub->get_name();
    if (sub->count("--seed")) opts.seed = seed;
  }
  return enzlogic::run(opts, std::cout, std::cerr);
}
