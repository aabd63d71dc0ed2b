#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "holdem/cards.hpp"
#include "holdem/range.hpp"
#include "holdem/rng.hpp"

namespace holdem {

/// Thrown when a weighted range has no live mass once dead cards are removed.
class DegenerateRange : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Enumeration vs sampling switch. Work whose outcome space (opponent
/// holdings times board completions) fits in `max_enumeration` is enumerated
/// exactly; anything larger is sampled `samples` times.
struct EquityConfig {
  std::uint64_t max_enumeration = 1'000'000;
  int samples = 10'000;
  /// Board cards looked ahead on the flop when computing potential: 1 or 2.
  int flop_lookahead = 1;

  /// Cheaper preset for in-game decisions.
  static EquityConfig play();
};

struct Potential {
  double ppot = 0.0;
  double npot = 0.0;
};

struct Strengths {
  double hs = 0.0;
  double ppot = 0.0;
  double npot = 0.0;
  double ehs = 0.0;
};

/// ehs = hs + (1 - hs) * ppot.
double effective_strength(double hs, double ppot);

/// Probability that `hole` currently beats one weighted opponent holding
/// (ties count half), raised to `opponents`. On a 3..5 card board this is an
/// exact pass over every live holding; with an empty board the comparison is
/// at showdown over board completions and is sampled.
double hand_strength(const HoleCards& hole, std::span<const Card> board,
                     const WeightTable& range, int opponents,
                     const EquityConfig& config, Rng& rng);

/// Sampling estimate of the same quantity, used to cross-check enumeration.
double hand_strength_sampled(const HoleCards& hole, std::span<const Card> board,
                             const WeightTable& range, int opponents, int samples, Rng& rng);

/// Positive/negative potential against one weighted range. Board must hold
/// 3, 4 or 5 cards; a complete board yields (0, 0).
Potential hand_potential(const HoleCards& hole, std::span<const Card> board,
                         const WeightTable& range, const EquityConfig& config, Rng& rng);

/// Single-threaded reference for the enumeration path of hand_potential.
/// `lookahead` is the number of cards still to come to enumerate (1 or 2).
Potential hand_potential_serial(const HoleCards& hole, std::span<const Card> board,
                                const WeightTable& range, int lookahead);

Strengths effective_hand_strength(const HoleCards& hole, std::span<const Card> board,
                                  const WeightTable& range, int opponents,
                                  const EquityConfig& config, Rng& rng);

/// Joint version for several opponents with their own ranges: hs is the
/// product of per-range strengths and potential is measured against the range
/// the hero fares worst against.
Strengths effective_hand_strength(const HoleCards& hole, std::span<const Card> board,
                                  std::span<const WeightTable> ranges,
                                  const EquityConfig& config, Rng& rng);

/// Expected profit per preflop class in small bets per hand, from roll-outs in
/// which every player puts one small bet in, the board runs out, and the pot
/// is split among the best hands.
struct IncomeRateTable {
  std::array<double, kNumPreflopClasses> ev{};
  int players = 0;
  std::uint64_t iterations = 0;
  std::uint64_t seed = 0;

  double ev_of(PreflopClass cls) const { return ev[cls.id()]; }
  /// Classes ordered best first; ties broken by class id.
  std::vector<PreflopClass> ranking() const;

  std::string to_csv() const;
  static IncomeRateTable from_csv(std::string_view text);

  friend bool operator==(const IncomeRateTable&, const IncomeRateTable&) = default;
};

/// Roll-out generation, classes spread over OpenMP threads. Each class draws
/// from its own stream derived from `seed`, so output is independent of the
/// thread count and equal to income_rate_table_serial.
IncomeRateTable income_rate_table(int players, std::uint64_t iterations, std::uint64_t seed);
IncomeRateTable income_rate_table_serial(int players, std::uint64_t iterations, std::uint64_t seed);

/// Memoized tables for agents, keyed by player count. Generated on first use
/// with `iterations` roll-outs per class.
const IncomeRateTable& cached_income_table(int players, std::uint64_t iterations = 20'000,
                                           std::uint64_t seed = 1);

}  // namespace holdem
