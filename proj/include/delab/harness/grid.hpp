#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "delab/engine.hpp"
#include "delab/harness/csv.hpp"

namespace delab {

/// A full experiment grid: the Cartesian product of all axes, each cell run
/// runs_per_config times with sequentially assigned seeds.
struct GridSpec {
  std::vector<MutationKind> mutations;
  std::vector<CrossoverKind> crossovers;
  std::vector<StrategyKind> sdis_list{StrategyKind::Cotn,    StrategyKind::Dismiss,
                                      StrategyKind::Mirror,  StrategyKind::Saturation,
                                      StrategyKind::Toroidal, StrategyKind::Uniform};
  std::vector<std::size_t> population_sizes;
  std::vector<double> f_values;
  std::vector<double> cr_values;
  std::size_t runs_per_config = 50;
  std::size_t n = 30;
  std::uint64_t budget = 0;  // 0 means n * 10000
  std::uint64_t base_seed = 1;

  std::uint64_t effective_budget() const { return budget == 0 ? n * 10000 : budget; }
};

/// Default F grid: 10 evenly spaced values on (0, 2].
inline std::vector<double> default_f_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 10; ++i) grid.push_back(0.2 * i);
  return grid;
}

/// Default Cr grid: 5 evenly spaced values on [0, 1].
inline std::vector<double> default_cr_grid() { return {0.0, 0.25, 0.5, 0.75, 1.0}; }

namespace detail {

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& value, Parse parse) {
  std::vector<T> items;
  std::istringstream in(value);
  std::string token;
  while (std::getline(in, token, ',')) {
    const std::string trimmed = trim(token);
    if (trimmed.empty()) continue;
    items.push_back(parse(trimmed));
  }
  return items;
}

}  // namespace detail

/// Parse a grid spec from flat key-value text. mutations, crossovers and
/// population_sizes are required; the remaining keys fall back to the
/// defaults above.
inline GridSpec parse_grid_spec(const std::string& text) {
  const auto kv = detail::parse_kv(text);
  GridSpec spec;
  const auto get = [&](const char* key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (const auto* v = get("mutations"))
    spec.mutations = detail::parse_list<MutationKind>(*v, mutation_from_token);
  if (const auto* v = get("crossovers"))
    spec.crossovers = detail::parse_list<CrossoverKind>(*v, crossover_from_token);
  if (const auto* v = get("sdis_list"))
    spec.sdis_list = detail::parse_list<StrategyKind>(*v, strategy_from_token);
  if (const auto* v = get("population_sizes"))
    spec.population_sizes = detail::parse_list<std::size_t>(
        *v, [](const std::string& s) { return static_cast<std::size_t>(std::stoull(s)); });
  if (const auto* v = get("F_values"))
    spec.f_values = detail::parse_list<double>(*v, [](const std::string& s) { return std::stod(s); });
  if (const auto* v = get("Cr_values"))
    spec.cr_values = detail::parse_list<double>(*v, [](const std::string& s) { return std::stod(s); });
  if (const auto* v = get("runs_per_config")) spec.runs_per_config = std::stoull(*v);
  if (const auto* v = get("n")) spec.n = std::stoull(*v);
  if (const auto* v = get("budget")) spec.budget = std::stoull(*v);
  if (const auto* v = get("base_seed")) spec.base_seed = std::stoull(*v);
  if (spec.f_values.empty()) spec.f_values = default_f_grid();
  if (spec.cr_values.empty()) spec.cr_values = default_cr_grid();
  return spec;
}

inline GridSpec load_grid_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open spec file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_grid_spec(buffer.str());
}

/// Enumerate the grid in the fixed axis order mutation, crossover, sdis, N,
/// F, Cr. Cell k receives seed base_seed + k * runs_per_config, so run r of
/// that cell uses configuration seed + r; the assignment is a pure function
/// of the spec and independent of any execution order. Configurations are
/// not validated here: an invalid cell (say a population too small for its
/// mutation variant) fails on execution and is recorded in the manifest
/// without taking the rest of the grid down.
inline std::vector<Configuration> enumerate_grid(const GridSpec& spec) {
  if (spec.mutations.empty() || spec.crossovers.empty() || spec.sdis_list.empty() ||
      spec.population_sizes.empty() || spec.f_values.empty() || spec.cr_values.empty())
    throw std::invalid_argument("enumerate_grid: empty axis");
  if (spec.runs_per_config == 0)
    throw std::invalid_argument("enumerate_grid: runs_per_config must be >= 1");
  std::vector<Configuration> configurations;
  std::uint64_t index = 0;
  for (MutationKind mutation : spec.mutations) {
    for (CrossoverKind crossover : spec.crossovers) {
      for (StrategyKind sdis : spec.sdis_list) {
        for (std::size_t population : spec.population_sizes) {
          for (double f : spec.f_values) {
            for (double cr : spec.cr_values) {
              Configuration config;
              config.mutation = mutation;
              config.crossover = crossover;
              config.sdis = sdis;
              config.population_size = population;
              config.scale_factor = f;
              config.crossover_rate = cr;
              config.domain = Domain::unit(spec.n);
              config.budget = spec.effective_budget();
              config.seed = spec.base_seed + index * spec.runs_per_config;
              configurations.push_back(std::move(config));
              ++index;
            }
          }
        }
      }
    }
  }
  return configurations;
}

/// Filesystem-safe cell identifier, e.g. rand1_bin_sat_N20_F0.5_Cr0.25.
inline std::string config_label(const Configuration& config) {
  char f[32], cr[32];
  std::snprintf(f, sizeof(f), "%g", config.scale_factor);
  std::snprintf(cr, sizeof(cr), "%g", config.crossover_rate);
  std::ostringstream out;
  out << mutation_token(config.mutation) << '_' << crossover_token(config.crossover) << '_'
      << strategy_token(config.sdis) << "_N" << config.population_size << "_F" << f << "_Cr"
      << cr;
  return out.str();
}

}  // namespace delab
