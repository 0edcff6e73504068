#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "delab/domain.hpp"
#include "delab/objective.hpp"
#include "delab/rng.hpp"
#include "delab/sdis.hpp"

namespace delab {

/// DE mutation variants. CurrToRand1 has arithmetic recombination built in
/// and therefore bypasses the crossover stage.
enum class MutationKind {
  Rand1,
  Rand2,
  Best1,
  Best2,
  CurrToBest1,
  RandToBest2,
  CurrToRand1,
};

enum class CrossoverKind { Binomial, Exponential };

inline const char* mutation_token(MutationKind kind) {
  switch (kind) {
    case MutationKind::Rand1: return "rand1";
    case MutationKind::Rand2: return "rand2";
    case MutationKind::Best1: return "best1";
    case MutationKind::Best2: return "best2";
    case MutationKind::CurrToBest1: return "curr-to-best1";
    case MutationKind::RandToBest2: return "rand-to-best2";
    case MutationKind::CurrToRand1: return "curr-to-rand1";
  }
  throw std::invalid_argument("mutation_token: unknown mutation");
}

inline MutationKind mutation_from_token(const std::string& token) {
  if (token == "rand1") return MutationKind::Rand1;
  if (token == "rand2") return MutationKind::Rand2;
  if (token == "best1") return MutationKind::Best1;
  if (token == "best2") return MutationKind::Best2;
  if (token == "curr-to-best1") return MutationKind::CurrToBest1;
  if (token == "rand-to-best2") return MutationKind::RandToBest2;
  if (token == "curr-to-rand1") return MutationKind::CurrToRand1;
  throw std::invalid_argument("unknown mutation token: " + token);
}

inline const char* crossover_token(CrossoverKind kind) {
  return kind == CrossoverKind::Binomial ? "bin" : "exp";
}

inline CrossoverKind crossover_from_token(const std::string& token) {
  if (token == "bin") return CrossoverKind::Binomial;
  if (token == "exp") return CrossoverKind::Exponential;
  throw std::invalid_argument("unknown crossover token: " + token);
}

/// Random donors required by each variant, all distinct from each other and
/// from the target.
inline std::size_t donor_count(MutationKind kind) {
  switch (kind) {
    case MutationKind::Rand1: return 3;
    case MutationKind::Rand2: return 5;
    case MutationKind::Best1: return 2;
    case MutationKind::Best2: return 4;
    case MutationKind::CurrToBest1: return 2;
    case MutationKind::RandToBest2: return 5;
    case MutationKind::CurrToRand1: return 3;
  }
  throw std::invalid_argument("donor_count: unknown mutation");
}

/// Smallest population that can supply the target plus distinct donors.
inline std::size_t min_population(MutationKind kind) { return donor_count(kind) + 1; }

/// Complete description of one algorithm setup.
struct Configuration {
  MutationKind mutation = MutationKind::Rand1;
  CrossoverKind crossover = CrossoverKind::Binomial;
  std::size_t population_size = 20;
  double scale_factor = 0.5;    // F in (0, 2]
  double crossover_rate = 0.9;  // Cr in [0, 1]
  StrategyKind sdis = StrategyKind::Saturation;
  Domain domain = Domain::unit(30);
  std::uint64_t budget = 300000;
  std::uint64_t seed = 1;

  void validate() const {
    if (population_size < min_population(mutation))
      throw std::invalid_argument("Configuration: population too small for mutation variant");
    if (!(scale_factor > 0.0 && scale_factor <= 2.0))
      throw std::invalid_argument("Configuration: F must lie in (0, 2]");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
      throw std::invalid_argument("Configuration: Cr must lie in [0, 1]");
    if (budget < population_size)
      throw std::invalid_argument("Configuration: budget smaller than population size");
  }
};

struct Population {
  std::vector<Evaluation> members;
  std::size_t best_index = 0;

  void update_best() {
    best_index = 0;
    for (std::size_t i = 1; i < members.size(); ++i) {
      if (members[i].fitness < members[best_index].fitness) best_index = i;
    }
  }
};

/// Outcome of one run.
struct RunRecord {
  std::vector<double> best_position;
  double best_fitness = 0.0;
  double poc = 0.0;
  std::vector<std::uint64_t> per_dimension_violations;
  std::uint64_t evaluations_used = 0;
  std::uint64_t seed = 0;
};

/// Optional instrumentation hooks for a run.
struct RunObserver {
  /// Called with every position handed to the objective.
  std::function<void(std::span<const double>)> on_evaluation;
  /// Best fitness after initialisation and after each generation.
  std::vector<double>* best_fitness_trace = nullptr;
  /// Replaces the probe function when set (deterministic selection tests).
  std::function<double(std::span<const double>)> objective;
};

namespace detail {

inline double evaluate(RngState& state, std::span<const double> x, const RunObserver* observer) {
  if (observer != nullptr && observer->on_evaluation) observer->on_evaluation(x);
  if (observer != nullptr && observer->objective) return observer->objective(x);
  return f0_evaluate(state, x);
}

inline std::vector<std::size_t> draw_donors(RngState& state, std::size_t population_size,
                                            std::size_t target, std::size_t count) {
  std::vector<std::size_t> donors;
  donors.reserve(count);
  while (donors.size() < count) {
    const std::size_t candidate =
        static_cast<std::size_t>(state.uniform_int(population_size));
    if (candidate == target) continue;
    bool taken = false;
    for (std::size_t d : donors) {
      if (d == candidate) { taken = true; break; }
    }
    if (!taken) donors.push_back(candidate);
  }
  return donors;
}

}  // namespace detail

/// Sample N individuals uniformly in the box and evaluate each once. The
/// samples are booked in the ledger (always feasible, so only its
/// generated_count moves) so that at the end of a run generated_count equals
/// the budget exactly.
inline Population initialize(const Configuration& config, RngState& state,
                             CorrectionLedger& ledger, const RunObserver* observer = nullptr) {
  config.validate();
  const std::size_t n = config.domain.dimension();
  Population population;
  population.members.resize(config.population_size);
  for (auto& member : population.members) {
    member.position.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      member.position[i] = state.uniform_range(config.domain.lower(i), config.domain.upper(i));
    }
    correct(config.sdis, member.position, config.domain, state, ledger);
    member.fitness = detail::evaluate(state, member.position, observer);
  }
  population.update_best();
  return population;
}

/// Produce a mutant for the given target. Donors are drawn uniformly without
/// replacement, distinct from each other and from the target; for
/// CurrToRand1 the recombination weight K is drawn after the donors, uniform
/// in [0, 1], once per offspring. The mutant may leave the box; feasibility
/// is the correction strategy's concern.
inline std::vector<double> mutate(MutationKind kind, const Population& population,
                                  std::size_t target, double scale_factor, RngState& state) {
  const std::size_t count = donor_count(kind);
  if (population.members.size() < count + 1)
    throw std::invalid_argument("mutate: population cannot supply distinct donors");
  const auto donors =
      detail::draw_donors(state, population.members.size(), target, count);
  const auto member = [&](std::size_t index) -> const std::vector<double>& {
    return population.members[index].position;
  };
  const std::vector<double>& x = member(target);
  const std::vector<double>& best = member(population.best_index);
  const double F = scale_factor;
  const std::size_t n = x.size();
  std::vector<double> mutant(n);

  switch (kind) {
    case MutationKind::Rand1: {
      const auto &r1 = member(donors[0]), &r2 = member(donors[1]), &r3 = member(donors[2]);
      for (std::size_t i = 0; i < n; ++i) mutant[i] = r1[i] + F * (r2[i] - r3[i]);
      break;
    }
    case MutationKind::Rand2: {
      const auto &r1 = member(donors[0]), &r2 = member(donors[1]), &r3 = member(donors[2]),
                 &r4 = member(donors[3]), &r5 = member(donors[4]);
      for (std::size_t i = 0; i < n; ++i)
        mutant[i] = r1[i] + F * (r2[i] - r3[i]) + F * (r4[i] - r5[i]);
      break;
    }
    case MutationKind::Best1: {
      const auto &r1 = member(donors[0]), &r2 = member(donors[1]);
      for (std::size_t i = 0; i < n; ++i) mutant[i] = best[i] + F * (r1[i] - r2[i]);
      break;
    }
    case MutationKind::Best2: {
      const auto &r1 = member(donors[0]), &r2 = member(donors[1]), &r3 = member(donors[2]),
                 &r4 = member(donors[3]);
      for (std::size_t i = 0; i < n; ++i)
        mutant[i] = best[i] + F * (r1[i] - r2[i]) + F * (r3[i] - r4[i]);
      break;
    }
    case MutationKind::CurrToBest1: {
      const auto &r1 = member(donors[0]), &r2 = member(donors[1]);
      for (std::size_t i = 0; i < n; ++i)
        mutant[i] = x[i] + F * (best[i] - x[i]) + F * (r1[i] - r2[i]);
      break;
    }
    case MutationKind::RandToBest2: {
      const auto &r1 = member(donors[0]), &r2 = member(donors[1]), &r3 = member(donors[2]),
                 &r4 = member(donors[3]), &r5 = member(donors[4]);
      for (std::size_t i = 0; i < n; ++i)
        mutant[i] = r1[i] + F * (best[i] - r1[i]) + F * (r2[i] - r3[i]) + F * (r4[i] - r5[i]);
      break;
    }
    case MutationKind::CurrToRand1: {
      const auto &r1 = member(donors[0]), &r2 = member(donors[1]), &r3 = member(donors[2]);
      const double K = state.uniform01();
      for (std::size_t i = 0; i < n; ++i)
        mutant[i] = x[i] + K * (r1[i] - x[i]) + F * (r2[i] - r3[i]);
      break;
    }
  }
  return mutant;
}

/// Binomial crossover: coordinate i comes from the mutant iff a fresh
/// uniform draw is < Cr or i equals the forced index. One draw is consumed
/// per coordinate, forced index included.
inline std::vector<double> crossover_binomial(std::span<const double> parent,
                                              std::span<const double> mutant, double crossover_rate,
                                              RngState& state) {
  if (parent.size() != mutant.size())
    throw std::invalid_argument("crossover_binomial: length mismatch");
  const std::size_t n = parent.size();
  const std::size_t forced = static_cast<std::size_t>(state.uniform_int(n));
  std::vector<double> offspring(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = state.uniform01();
    offspring[i] = (u < crossover_rate || i == forced) ? mutant[i] : parent[i];
  }
  return offspring;
}

/// Exponential crossover: a contiguous circular block starting at a random
/// index is copied from the mutant; after each copy the block continues with
/// probability Cr, so block lengths follow a truncated geometric law.
inline std::vector<double> crossover_exponential(std::span<const double> parent,
                                                 std::span<const double> mutant,
                                                 double crossover_rate, RngState& state) {
  if (parent.size() != mutant.size())
    throw std::invalid_argument("crossover_exponential: length mismatch");
  const std::size_t n = parent.size();
  std::vector<double> offspring(parent.begin(), parent.end());
  const std::size_t start = static_cast<std::size_t>(state.uniform_int(n));
  std::size_t i = start;
  do {
    offspring[i] = mutant[i];
    i = (i + 1) % n;
  } while (state.uniform01() < crossover_rate && i != start);
  return offspring;
}

/// Advance one generation: for each of the first max_offspring targets,
/// mutate, cross over, correct, evaluate, then keep the better of offspring
/// and parent (<=, offspring wins ties). Replacement is synchronous: donors
/// and the best individual are read from the incoming population throughout.
/// A dismissed offspring leaves the parent in place; its budget slot is
/// consumed either way.
inline Population step(const Configuration& config, const Population& population,
                       CorrectionLedger& ledger, RngState& state,
                       std::size_t max_offspring, const RunObserver* observer = nullptr) {
  if (max_offspring > config.population_size)
    throw std::invalid_argument("step: max_offspring exceeds population size");
  Population next;
  next.members = population.members;
  for (std::size_t target = 0; target < max_offspring; ++target) {
    const Evaluation& parent = population.members[target];
    std::vector<double> offspring =
        mutate(config.mutation, population, target, config.scale_factor, state);
    if (config.mutation != MutationKind::CurrToRand1) {
      offspring = config.crossover == CrossoverKind::Binomial
                      ? crossover_binomial(parent.position, offspring, config.crossover_rate, state)
                      : crossover_exponential(parent.position, offspring, config.crossover_rate, state);
    }
    const CorrectionOutcome outcome =
        correct(config.sdis, offspring, config.domain, state, ledger);
    if (outcome.rejected) continue;  // parent survives, slot consumed
    const double fitness = detail::evaluate(state, outcome.position, observer);
    if (fitness <= parent.fitness) {
      next.members[target].position = outcome.position;
      next.members[target].fitness = fitness;
    }
  }
  next.update_best();
  return next;
}

/// Execute one full run: initialise, then generations until exactly budget
/// slots are consumed (the final generation may be partial, processing
/// targets in order). Returns the final best with the infeasibility counters.
inline RunRecord run(const Configuration& config, const RunObserver* observer = nullptr) {
  config.validate();
  RngState state(config.seed);
  CorrectionLedger ledger(config.domain.dimension());
  Population population = initialize(config, state, ledger, observer);
  std::uint64_t used = config.population_size;
  if (observer != nullptr && observer->best_fitness_trace != nullptr)
    observer->best_fitness_trace->push_back(population.members[population.best_index].fitness);
  while (used < config.budget) {
    const std::uint64_t remaining = config.budget - used;
    const std::size_t batch = static_cast<std::size_t>(
        remaining < config.population_size ? remaining : config.population_size);
    population = step(config, population, ledger, state, batch, observer);
    used += batch;
    if (observer != nullptr && observer->best_fitness_trace != nullptr)
      observer->best_fitness_trace->push_back(population.members[population.best_index].fitness);
  }

  RunRecord record;
  const Evaluation& best = population.members[population.best_index];
  record.best_position = best.position;
  record.best_fitness = best.fitness;
  record.poc = poc(ledger, config.budget);
  record.per_dimension_violations = ledger.per_dimension;
  record.evaluations_used = used;
  record.seed = config.seed;
  return record;
}

/// Flat key-value serialisation of a Configuration. The domain is carried by
/// its dimension only (the unit box); non-unit boxes are a programmatic
/// construction.
inline std::string config_to_kv(const Configuration& config) {
  char buffer[64];
  std::ostringstream out;
  out << "mutation = " << mutation_token(config.mutation) << '\n';
  out << "crossover = " << crossover_token(config.crossover) << '\n';
  out << "N = " << config.population_size << '\n';
  std::snprintf(buffer, sizeof(buffer), "%.17g", config.scale_factor);
  out << "F = " << buffer << '\n';
  std::snprintf(buffer, sizeof(buffer), "%.17g", config.crossover_rate);
  out << "Cr = " << buffer << '\n';
  out << "sdis = " << strategy_token(config.sdis) << '\n';
  out << "n = " << config.domain.dimension() << '\n';
  out << "budget = " << config.budget << '\n';
  out << "seed = " << config.seed << '\n';
  return out.str();
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected 'key = value', got: " + line);
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

}  // namespace detail

inline Configuration config_from_kv(const std::string& text) {
  const auto kv = detail::parse_kv(text);
  const auto need = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument(std::string("missing key: ") + key);
    return it->second;
  };
  Configuration config;
  config.mutation = mutation_from_token(need("mutation"));
  config.crossover = crossover_from_token(need("crossover"));
  config.population_size = static_cast<std::size_t>(std::stoull(need("N")));
  config.scale_factor = std::stod(need("F"));
  config.crossover_rate = std::stod(need("Cr"));
  config.sdis = strategy_from_token(need("sdis"));
  config.domain = Domain::unit(static_cast<std::size_t>(std::stoull(need("n"))));
  config.budget = std::stoull(need("budget"));
  config.seed = std::stoull(need("seed"));
  config.validate();
  return config;
}

}  // namespace delab
