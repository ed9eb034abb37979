#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "qdyn/experiment.hpp"
#include "qdyn/version.hpp"

namespace {

struct RunArgs {
  std::string config;
  std::string out;
};

void add_run_subcommand(CLI::App& app, const std::string& name, const std::string& desc,
                        std::vector<std::pair<std::string, RunArgs>>& requested) {
  CLI::App* sub = app.add_subcommand(name, desc);
  auto args = std::make_shared<RunArgs>();
  args->out = "out-" + name;
  sub->add_option("-c,--config", args->config, "scenario file")->required();
  sub->add_option("-o,--out", args->out, "output directory");
  sub->callback([name, args, &requested] { requested.emplace_back(name, *args); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qdyn: perturbative and exact dynamics for truncated oscillator bases"};
  app.set_version_flag("--version", std::string(qdyn::version_string));
  app.require_subcommand(1);

  std::vector<std::pair<std::string, RunArgs>> runs;
  add_run_subcommand(app, "dirac",
                     "first-order transition amplitudes and coefficient-equation norms", runs);
  add_run_subcommand(app, "quasicanon",
                     "gauge-invariant observable trajectories from field-level rate laws", runs);
  add_run_subcommand(app, "soperator",
                     "first-order transition matrix between observable eigenstates", runs);
  add_run_subcommand(app, "oracle", "exact propagation on the full retained basis", runs);

  CLI::App* compare = app.add_subcommand("compare", "join two summary.csv files on quantity");
  std::string cmp_pert, cmp_exact, cmp_out = "compare.csv";
  compare->add_option("-p,--perturbative", cmp_pert, "summary.csv of the perturbative run")
      ->required();
  compare->add_option("-e,--exact", cmp_exact, "summary.csv of the exact run")->required();
  compare->add_option("-o,--out", cmp_out, "output csv path");

  CLI::App* sweep = app.add_subcommand("sweep", "run one subcommand over several configs");
  std::string sweep_sub;
  std::vector<std::string> sweep_configs;
  std::string sweep_out = "out-sweep";
  sweep->add_option("subcommand", sweep_sub, "dirac|quasicanon|soperator|oracle")->required();
  sweep->add_option("configs", sweep_configs, "scenario files")->required()->expected(-1);
  sweep->add_option("-o,--out", sweep_out, "output root directory");

  CLI11_PARSE(app, argc, argv);

  return qdyn::guarded(
      [&] {
        if (!runs.empty()) {
          const auto& [name, args] = runs.front();
          qdyn::run_single(name, args.config, args.out, std::cout);
        } else if (compare->parsed()) {
          qdyn::run_compare(cmp_pert, cmp_exact, cmp_out, std::cout);
        } else if (sweep->parsed()) {
          std::vector<std::filesystem::path> paths(sweep_configs.begin(), sweep_configs.end());
          qdyn::run_sweep(sweep_sub, paths, sweep_out, std::cout);
        }
      },
      std::cerr);
}
