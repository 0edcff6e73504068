#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "delab/domain.hpp"
#include "delab/rng.hpp"

namespace delab {

/// Strategies of Dealing with Infeasible Solutions. Penalise is not listed
/// separately: under greedy one-to-one selection it behaves exactly like
/// Dismiss, so Dismiss covers both.
enum class StrategyKind { Saturation, Toroidal, Mirror, Uniform, Cotn, Dismiss };

inline const char* strategy_token(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Saturation: return "sat";
    case StrategyKind::Toroidal: return "tor";
    case StrategyKind::Mirror: return "mir";
    case StrategyKind::Uniform: return "uni";
    case StrategyKind::Cotn: return "cotn";
    case StrategyKind::Dismiss: return "dis";
  }
  throw std::invalid_argument("strategy_token: unknown strategy");
}

inline StrategyKind strategy_from_token(const std::string& token) {
  if (token == "sat") return StrategyKind::Saturation;
  if (token == "tor") return StrategyKind::Toroidal;
  if (token == "mir") return StrategyKind::Mirror;
  if (token == "uni") return StrategyKind::Uniform;
  if (token == "cotn") return StrategyKind::Cotn;
  if (token == "dis") return StrategyKind::Dismiss;
  throw std::invalid_argument("unknown strategy token: " + token);
}

/// Infeasibility accounting for one run. generated_count counts every
/// solution that passed through correct(); infeasible_count those with at
/// least one violated coordinate; per_dimension the violations per axis.
struct CorrectionLedger {
  explicit CorrectionLedger(std::size_t dimension)
      : per_dimension(dimension, 0) {}

  std::uint64_t generated_count = 0;
  std::uint64_t infeasible_count = 0;
  std::vector<std::uint64_t> per_dimension;
};

/// Result of applying a strategy to one candidate solution. Rejected occurs
/// only for Dismiss on an infeasible input; every other outcome carries a
/// feasible position.
struct CorrectionOutcome {
  bool rejected = false;
  std::vector<double> position;
  std::vector<std::size_t> violated;
  bool was_infeasible = false;
};

namespace detail {

/// Periodic wrap of x into [lo, hi].
inline double toroidal_wrap(double x, double lo, double hi) {
  const double w = hi - lo;
  double r = std::fmod(x - lo, w);
  if (r < 0.0) r += w;
  double y = lo + r;
  if (y < lo) y = lo;
  if (y > hi) y = hi;  // fp guard at the bound
  return y;
}

/// Reflect off the violated bound, repeating until inside: a triangle wave
/// with period 2w, evaluated in closed form.
inline double mirror_fold(double x, double lo, double hi) {
  const double w = hi - lo;
  double t = std::fmod(x - lo, 2.0 * w);
  if (t < 0.0) t += 2.0 * w;
  double y = lo + (t <= w ? t : 2.0 * w - t);
  if (y < lo) y = lo;
  if (y > hi) y = hi;
  return y;
}

}  // namespace detail

/// Default scale divisor for the COTN strategy: sigma = width / 3.
inline constexpr double kCotnSigmaDivisor = 3.0;

/// Apply a strategy to a candidate. Feasible coordinates are never touched;
/// each violated coordinate is fixed independently (Dismiss acts on the whole
/// vector instead). The ledger is updated on every call: generated_count
/// always, the infeasibility counters only when the input was infeasible.
///
/// Saturation/Toroidal/Mirror consume no RNG draws; Uniform and COTN draw
/// only for violated coordinates, so the stream stays aligned across
/// strategies on feasible inputs.
inline CorrectionOutcome correct(StrategyKind kind, std::span<const double> x,
                                 const Domain& domain, RngState& state,
                                 CorrectionLedger& ledger,
                                 double cotn_sigma_divisor = kCotnSigmaDivisor) {
  if (x.size() != domain.dimension())
    throw std::invalid_argument("correct: vector length does not match domain");
  if (ledger.per_dimension.size() != domain.dimension())
    throw std::invalid_argument("correct: ledger dimension mismatch");

  CorrectionOutcome outcome;
  outcome.violated = domain.violated_dimensions(x);
  outcome.was_infeasible = !outcome.violated.empty();

  ledger.generated_count += 1;
  if (outcome.was_infeasible) {
    ledger.infeasible_count += 1;
    for (std::size_t i : outcome.violated) ledger.per_dimension[i] += 1;
  }

  if (!outcome.was_infeasible) {
    outcome.position.assign(x.begin(), x.end());
    return outcome;
  }

  if (kind == StrategyKind::Dismiss) {
    outcome.rejected = true;
    return outcome;
  }

  outcome.position.assign(x.begin(), x.end());
  for (std::size_t i : outcome.violated) {
    const double lo = domain.lower(i);
    const double hi = domain.upper(i);
    double& value = outcome.position[i];
    switch (kind) {
      case StrategyKind::Saturation:
        value = value < lo ? lo : hi;
        break;
      case StrategyKind::Toroidal:
        value = detail::toroidal_wrap(value, lo, hi);
        break;
      case StrategyKind::Mirror:
        value = detail::mirror_fold(value, lo, hi);
        break;
      case StrategyKind::Uniform:
        value = state.uniform_range(lo, hi);
        break;
      case StrategyKind::Cotn: {
        const double sigma = (hi - lo) / cotn_sigma_divisor;
        const bool below = value < lo;
        // Anchor at the violated bound, point inward, redraw until the
        // opposite bound is respected as well.
        double draw;
        do {
          draw = below ? state.truncated_normal_onesided(lo, sigma, TruncationSide::Above)
                       : state.truncated_normal_onesided(hi, sigma, TruncationSide::Below);
        } while (draw < lo || draw > hi);
        value = draw;
        break;
      }
      case StrategyKind::Dismiss:
        break;  // unreachable, handled above
    }
  }
  return outcome;
}

/// Percentage of corrections: infeasible solutions over the evaluation budget.
inline double poc(const CorrectionLedger& ledger, std::uint64_t budget) {
  if (budget == 0) throw std::invalid_argument("poc: requires budget > 0");
  return static_cast<double>(ledger.infeasible_count) / static_cast<double>(budget);
}

/// Probability that a solution violates at least one of n dimensions when
/// each dimension is violated independently with rate p: 1 - (1-p)^n.
inline double infeasibility_probability(double p, std::uint64_t n) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("infeasibility_probability: requires p in [0,1]");
  if (n == 0) throw std::invalid_argument("infeasibility_probability: requires n >= 1");
  return 1.0 - std::pow(1.0 - p, static_cast<double>(n));
}

}  // namespace delab
