// ddlab: run a scenario file and write its report and tables.
//
//   ddlab classify --config scenario.json --out out/
//   ddlab spectrum --config scenario.json --out out/ --force
//   ddlab norm     --config scenario.json
//   ddlab sweep    --config scenario.json --seed 7

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ddlab/error.hpp"
#include "ddlab/runner.hpp"
#include "ddlab/scenario.hpp"

namespace {

struct VerbOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool force = false;
};

void add_common(CLI::App* verb, VerbOptions& opts) {
  verb->add_option("--config", opts.config, "scenario file (JSON)")->required()->check(CLI::ExistingFile);
  verb->add_option("--out", opts.out, "output directory (default: the scenario's output.dir)");
  verb->add_option("--seed", opts.seed, "seed for randomized stress inputs");
  verb->add_flag("--force", opts.force, "run the spectrum check without established compactness");
}

int run(ddlab::Experiment experiment, const VerbOptions& opts) {
  auto scenario = ddlab::load_scenario(opts.config);
  scenario.experiment = experiment;
  if (opts.seed) scenario.seed = *opts.seed;
  if (opts.force) scenario.force = true;
  const std::filesystem::path out = opts.out.empty() ? scenario.output_dir : opts.out;

  const auto result = ddlab::run_scenario(scenario, out);
  const auto& report = result.report;
  if (report.contains("classification")) {
    std::cout << "conclusion: " << report["classification"]["conclusion"].get<std::string>() << "\n";
  }
  if (report.contains("spectrum")) {
    std::cout << "top-k max distance: " << report["spectrum"]["top_k_max_distance"].dump() << "\n";
  }
  if (report.contains("norm_profile")) {
    std::cout << "norm verdict: " << report["norm_profile"]["verdict"].get<std::string>() << "\n";
  }
  if (report.contains("rows")) std::cout << "sweep rows: " << report["rows"].size() << "\n";
  if (result.exit_code == ddlab::kExitInconsistent) {
    std::cerr << "warning: necessity violation with forced compactness\n";
  }
  std::cout << "wrote " << out.string() << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composition operators on weighted algebras of smooth functions"};
  app.require_subcommand(1);

  VerbOptions opts;
  struct Verb {
    const char* name;
    const char* help;
    ddlab::Experiment experiment;
  };
  const Verb verbs[] = {
      {"classify", "evaluate the compactness conditions for a map", ddlab::Experiment::classify},
      {"spectrum", "compare truncation eigenvalues with the predicted spectrum", ddlab::Experiment::spectrum},
      {"norm", "weighted norm profile of a stress function under composition", ddlab::Experiment::norm_profile},
      {"sweep", "classify and check spectra over a parameter grid", ddlab::Experiment::sweep},
  };
  std::optional<ddlab::Experiment> chosen;
  for (const auto& [name, help, experiment] : verbs) {
    auto* verb = app.add_subcommand(name, help);
    add_common(verb, opts);
    verb->callback([&chosen, experiment = experiment] { chosen = experiment; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return run(*chosen, opts);
  } catch (const ddlab::LabError& e) {
    std::cerr << "error [" << ddlab::to_string(e.kind()) << "]: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return ddlab::kExitError;
}
