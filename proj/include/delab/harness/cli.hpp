#pragma once

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "delab/harness/battery.hpp"
#include "delab/harness/experiment.hpp"
#include "delab/harness/grid.hpp"
#include "delab/sdis.hpp"
#include "delab/stats/uniformity.hpp"

namespace delab {

/// Entry point behind the delab binary. Exit codes: 0 success, 1 usage
/// error, 2 data error.
inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Boundary-constraint laboratory for differential evolution: "
               "instrumented DE runs on the stochastic probe function and a "
               "statistical battery for structural bias and anisotropy"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Execute a configuration grid from a spec file");
  std::string spec_path, out_dir = "results";
  std::size_t parallel = 1;
  run_cmd->add_option("--spec", spec_path, "Grid spec file (flat key = value)")->required();
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);

  // poc
  auto* poc_cmd = app.add_subcommand("poc", "Summarise PoC distributions of a results directory");
  std::string poc_dir, poc_out;
  poc_cmd->add_option("dir", poc_dir, "Results directory with manifest.json")->required();
  poc_cmd->add_option("--out", poc_out, "Output directory (defaults to the results directory)");

  // sbtest
  auto* sb_cmd = app.add_subcommand("sbtest", "Run the structural-bias battery on a positions CSV");
  std::string sb_csv, sb_out;
  BatteryOptions battery_options;
  double sb_threshold = -1.0;
  sb_cmd->add_option("csv", sb_csv, "Positions CSV (run,seed,poc,dim_0,...)")->required();
  sb_cmd->add_option("--alpha", battery_options.alpha, "Significance level")
      ->check(CLI::Range(0.0, 1.0));
  sb_cmd->add_option("--permutations", battery_options.permutations,
                     "Permutation replicates for the anisotropy test");
  sb_cmd->add_option("--bootstrap", battery_options.bootstrap,
                     "Bootstrap replicates for the count distribution");
  sb_cmd->add_option("--seed", battery_options.seed, "Seed for the simulation-backed methods");
  sb_cmd->add_option("--threshold", sb_threshold,
                     "Correlation outlier threshold (simulated when omitted)");
  sb_cmd->add_option("--out", sb_out, "Output directory (defaults to the CSV's directory)");

  // baseline
  auto* base_cmd = app.add_subcommand("baseline",
                                      "Emit the correlation outlier threshold and, optionally, "
                                      "the pooled spacing baseline");
  std::size_t base_runs = 100, base_sims = 10000, spacing_reps = 1000;
  double base_percentile = 99.0;
  std::uint64_t base_seed = 1;
  std::string spacings_out;
  base_cmd->add_option("--runs", base_runs, "Sample size per simulated run");
  base_cmd->add_option("--simulations", base_sims, "Number of simulations");
  base_cmd->add_option("--percentile", base_percentile, "Percentile of |rho|")
      ->check(CLI::Range(0.0, 100.0));
  base_cmd->add_option("--seed", base_seed, "Simulation seed");
  base_cmd->add_option("--spacings-out", spacings_out, "Write the pooled spacing baseline CSV here");
  base_cmd->add_option("--spacing-replicates", spacing_reps, "Uniform replicates for the spacings");

  // prob
  auto* prob_cmd = app.add_subcommand("prob", "Tabulate the infeasibility probability 1-(1-p)^n");
  std::vector<double> prob_p;
  std::vector<std::uint64_t> prob_n;
  prob_cmd->add_option("--p", prob_p, "Per-dimension violation rates")
      ->required()
      ->delimiter(',');
  prob_cmd->add_option("--n", prob_n, "Dimensionalities")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      app.exit(e);
      return 0;
    }
    app.exit(e);
    return 1;
  }

  try {
    if (run_cmd->parsed()) {
      const GridSpec spec = load_grid_spec(spec_path);
      const ExperimentResult result = run_experiment(spec, out_dir, parallel);
      std::size_t failed = 0;
      for (const CellResult& cell : result.cells) failed += cell.failed() ? 1 : 0;
      std::cout << result.cells.size() << " cells, " << failed << " failed, output in "
                << out_dir << '\n';
    } else if (poc_cmd->parsed()) {
      const std::filesystem::path out = poc_out.empty() ? poc_dir : poc_out;
      const auto summaries = summarize_poc_directory(poc_dir, out);
      std::cout << summaries.size() << " cells summarised, output in " << out.string() << '\n';
    } else if (sb_cmd->parsed()) {
      if (sb_threshold >= 0.0) battery_options.threshold = sb_threshold;
      const PositionsFile file = read_positions_csv(sb_csv);
      const BatteryReport report = run_sb_battery(file.matrix(), battery_options);
      const std::filesystem::path csv_path(sb_csv);
      const std::filesystem::path out =
          sb_out.empty() ? csv_path.parent_path() : std::filesystem::path(sb_out);
      std::filesystem::create_directories(out.empty() ? "." : out);
      const std::string stem = csv_path.stem().string();
      write_battery_csv(out / (stem + "_battery.csv"), report);
      std::ofstream json_out(out / (stem + "_battery.json"));
      if (!json_out) throw DataError("cannot write battery JSON in " + out.string());
      const nlohmann::json j = battery_to_json(report);
      json_out << j.dump(2) << '\n';
      std::cout << j["overview"].dump() << '\n';
    } else if (base_cmd->parsed()) {
      RngState state(base_seed);
      const double threshold =
          stats::correlation_baseline_threshold(base_runs, base_sims, base_percentile, state);
      char buffer[32];
      std::snprintf(buffer, sizeof(buffer), "%.4f", threshold);
      std::cout << buffer << '\n';
      if (!spacings_out.empty()) {
        RngState spacing_state(base_seed + 0x5350414345ULL);
        std::ofstream out(spacings_out);
        if (!out) throw DataError("cannot open for writing: " + spacings_out);
        out << "spacing\n";
        std::vector<double> sample(base_runs);
        for (std::size_t rep = 0; rep < spacing_reps; ++rep) {
          for (double& v : sample) v = spacing_state.uniform01();
          for (double gap : stats::detail::unit_spacings(sample))
            out << csv::format_double(gap) << '\n';
        }
      }
    } else if (prob_cmd->parsed()) {
      std::cout << "p,n,probability\n";
      for (double p : prob_p) {
        for (std::uint64_t n : prob_n) {
          char line[96];
          std::snprintf(line, sizeof(line), "%g,%llu,%.4f", p,
                        static_cast<unsigned long long>(n), infeasibility_probability(p, n));
          std::cout << line << '\n';
        }
      }
    }
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace delab
