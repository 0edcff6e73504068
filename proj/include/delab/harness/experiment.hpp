#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "delab/engine.hpp"
#include "delab/harness/csv.hpp"
#include "delab/harness/grid.hpp"
#include "delab/stats/quantile.hpp"

namespace delab {

/// One executed grid cell. A failure in any of its runs marks the whole cell
/// failed and leaves the rest of the grid untouched.
struct CellResult {
  Configuration config;
  std::string label;
  std::vector<RunRecord> records;
  std::string error;  // empty on success

  bool failed() const { return !error.empty(); }
};

struct ExperimentResult {
  std::vector<CellResult> cells;
};

/// Execute every cell of the grid, runs_per_config runs each, and write one
/// positions CSV per cell plus a manifest.json describing the spec. Seeds
/// are fixed by grid position, results are stored by index and files are
/// written by a single thread afterwards, so the output is byte-identical
/// for any parallelism level and idempotent across re-runs.
inline ExperimentResult run_experiment(const GridSpec& spec,
                                       const std::filesystem::path& out_dir,
                                       std::size_t parallelism = 1) {
  if (parallelism == 0) parallelism = 1;
  const std::vector<Configuration> configurations = enumerate_grid(spec);
  std::filesystem::create_directories(out_dir);

  ExperimentResult result;
  result.cells.resize(configurations.size());
  std::vector<std::vector<std::string>> run_errors(configurations.size());
  for (std::size_t c = 0; c < configurations.size(); ++c) {
    result.cells[c].config = configurations[c];
    result.cells[c].label = config_label(configurations[c]);
    result.cells[c].records.resize(spec.runs_per_config);
    run_errors[c].resize(spec.runs_per_config);
  }

  const std::size_t total_tasks = configurations.size() * spec.runs_per_config;
  std::atomic<std::size_t> next_task{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t task = next_task.fetch_add(1);
      if (task >= total_tasks) return;
      const std::size_t cell = task / spec.runs_per_config;
      const std::size_t run_index = task % spec.runs_per_config;
      Configuration config = configurations[cell];
      config.seed = configurations[cell].seed + run_index;
      try {
        result.cells[cell].records[run_index] = run(config);
      } catch (const std::exception& e) {
        run_errors[cell][run_index] = e.what();
      }
    }
  };
  if (parallelism == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(parallelism);
    for (std::size_t t = 0; t < parallelism; ++t) threads.emplace_back(worker);
    for (auto& thread : threads) thread.join();
  }

  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    for (const std::string& error : run_errors[c]) {
      if (!error.empty()) {
        result.cells[c].error = error;
        break;
      }
    }
  }

  nlohmann::json manifest;
  manifest["runs_per_config"] = spec.runs_per_config;
  manifest["n"] = spec.n;
  manifest["budget"] = spec.effective_budget();
  manifest["base_seed"] = spec.base_seed;
  manifest["quantile_convention"] =
      "linear interpolation between order statistics (type 7)";
  manifest["cells"] = nlohmann::json::array();
  for (const CellResult& cell : result.cells) {
    nlohmann::json entry;
    entry["label"] = cell.label;
    entry["file"] = cell.label + ".csv";
    entry["mutation"] = mutation_token(cell.config.mutation);
    entry["crossover"] = crossover_token(cell.config.crossover);
    entry["sdis"] = strategy_token(cell.config.sdis);
    entry["N"] = cell.config.population_size;
    entry["F"] = cell.config.scale_factor;
    entry["Cr"] = cell.config.crossover_rate;
    entry["seed"] = cell.config.seed;
    entry["status"] = cell.failed() ? "failed" : "ok";
    if (cell.failed()) entry["error"] = cell.error;
    manifest["cells"].push_back(entry);
    if (!cell.failed())
      write_positions_csv(out_dir / (cell.label + ".csv"), cell.records, spec.n);
  }
  std::ofstream manifest_out(out_dir / "manifest.json");
  if (!manifest_out) throw DataError("cannot write manifest in " + out_dir.string());
  manifest_out << manifest.dump(2) << '\n';
  return result;
}

/// Median and IQR of the PoC samples of one cell.
struct PocSummary {
  std::string label;
  double median = 0.0;
  double iqr = 0.0;
  std::vector<double> samples;
};

inline PocSummary summarize_poc_samples(std::string label, std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("summarize_poc: empty group");
  PocSummary summary;
  summary.label = std::move(label);
  summary.median = stats::median(samples);
  summary.iqr = stats::interquartile_range(samples);
  summary.samples = std::move(samples);
  return summary;
}

/// True iff (F, Cr) is one of the parameter pairs recommended in the DE
/// literature, compared with absolute tolerance 1e-9.
inline bool recommended_region_flag(double f, double cr) {
  constexpr double kTolerance = 1e-9;
  constexpr double kF[] = {0.483, 0.7, 0.916};
  constexpr double kCr[] = {0.755, 0.99};
  bool f_match = false, cr_match = false;
  for (double v : kF) f_match = f_match || std::abs(f - v) <= kTolerance;
  for (double v : kCr) cr_match = cr_match || std::abs(cr - v) <= kTolerance;
  return f_match && cr_match;
}

/// Summarise the PoC distribution of every successful cell in a results
/// directory: a long-format CSV of median/IQR per cell and a 20-bin
/// histogram CSV, both plot-ready for the F x Cr grids.
inline std::vector<PocSummary> summarize_poc_directory(const std::filesystem::path& dir,
                                                       const std::filesystem::path& out_dir,
                                                       std::size_t histogram_bins = 20) {
  std::ifstream manifest_in(dir / "manifest.json");
  if (!manifest_in) throw DataError("cannot open manifest: " + (dir / "manifest.json").string());
  nlohmann::json manifest;
  try {
    manifest_in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed manifest: " + std::string(e.what()));
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream summary_out(out_dir / "poc_summary.csv");
  std::ofstream hist_out(out_dir / "poc_hist.csv");
  if (!summary_out || !hist_out) throw DataError("cannot write summaries in " + out_dir.string());
  summary_out << "mutation,crossover,sdis,N,F,Cr,median,iqr\n";
  hist_out << "mutation,crossover,sdis,N,F,Cr,recommended,bin_lo,bin_hi,count\n";

  std::vector<PocSummary> summaries;
  for (const auto& entry : manifest.at("cells")) {
    if (entry.at("status") != "ok") continue;
    const PositionsFile file = read_positions_csv(dir / entry.at("file").get<std::string>());
    PocSummary summary = summarize_poc_samples(entry.at("label").get<std::string>(), file.pocs);

    const std::string prefix = entry.at("mutation").get<std::string>() + "," +
                               entry.at("crossover").get<std::string>() + "," +
                               entry.at("sdis").get<std::string>() + "," +
                               std::to_string(entry.at("N").get<std::size_t>()) + "," +
                               csv::format_double(entry.at("F").get<double>()) + "," +
                               csv::format_double(entry.at("Cr").get<double>());
    summary_out << prefix << ',' << csv::format_double(summary.median) << ','
                << csv::format_double(summary.iqr) << '\n';

    std::vector<std::size_t> counts(histogram_bins, 0);
    for (double v : summary.samples) {
      std::size_t bin = static_cast<std::size_t>(v * static_cast<double>(histogram_bins));
      if (bin >= histogram_bins) bin = histogram_bins - 1;  // poc == 1.0
      counts[bin] += 1;
    }
    const bool recommended =
        recommended_region_flag(entry.at("F").get<double>(), entry.at("Cr").get<double>());
    for (std::size_t b = 0; b < histogram_bins; ++b) {
      const double lo = static_cast<double>(b) / static_cast<double>(histogram_bins);
      const double hi = static_cast<double>(b + 1) / static_cast<double>(histogram_bins);
      hist_out << prefix << ',' << (recommended ? 1 : 0) << ',' << csv::format_double(lo) << ','
               << csv::format_double(hi) << ',' << counts[b] << '\n';
    }
    summaries.push_back(std::move(summary));
  }
  return summaries;
}

}  // namespace delab
