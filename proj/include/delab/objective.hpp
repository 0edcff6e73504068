#pragma once

#include <span>
#include <vector>

#include "delab/rng.hpp"

namespace delab {

/// A position with its cached fitness value.
struct Evaluation {
  std::vector<double> position;
  double fitness = 0.0;
};

/// The stochastic probe function f0: every evaluation returns a fresh
/// U(0,1) draw, independent of the position. With the landscape force
/// switched off this way, any nonuniformity in the final solutions of an
/// optimiser is attributable to the algorithm itself.
///
/// The draw comes from the run's own RngState so the full run, fitness
/// values included, replays bit-identically from its seed.
inline double f0_evaluate(RngState& state, std::span<const double> /*x*/) {
  return state.uniform01();
}

}  // namespace delab
