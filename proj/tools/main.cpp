#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "edgesched/cli/commands.hpp"

using edgesched::cli::RunSpec;
using edgesched::cli::Subcommand;

namespace {

void add_common(CLI::App* cmd, RunSpec& spec) {
  cmd->add_option("--config", spec.config_path, "scenario config (JSON)");
  cmd->add_option("--override", spec.overrides, "KEY=VALUE, dotted keys, repeatable");
  cmd->add_option("--out", spec.output_dir, "output directory")->envname(edgesched::cli::kOutDirEnv);
  cmd->add_option("--seed", spec.seed, "base seed");
  cmd->add_option("--policy", spec.policy, "dynamic | rr | sra | cloud-only");
  cmd->add_option("--scenario", spec.scenario, "s1 | s2 | s3");
  cmd->add_option("--nodes", spec.nodes, "edge node count");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edge/cloud task scheduling simulator"};
  app.require_subcommand(1);
  RunSpec spec;

  auto* run = app.add_subcommand("run", "simulate one scenario");
  auto* sweep = app.add_subcommand("sweep", "dynamic/rr/sra over 4..16 nodes for one scenario");
  auto* compare = app.add_subcommand("compare", "all policies x S1..S3 x 4..16 nodes");
  auto* selfcheck = app.add_subcommand("selfcheck", "run built-in module oracles");
  for (auto* cmd : {run, sweep, compare}) add_common(cmd, spec);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return edgesched::cli::kConfigError;
  }

  if (*run) spec.subcommand = Subcommand::Run;
  if (*sweep) spec.subcommand = Subcommand::Sweep;
  if (*compare) spec.subcommand = Subcommand::Compare;
  if (*selfcheck) spec.subcommand = Subcommand::Selfcheck;
  return edgesched::cli::dispatch(spec, std::cout, std::cerr);
}
