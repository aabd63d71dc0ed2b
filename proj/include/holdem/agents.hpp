#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "holdem/engine.hpp"
#include "holdem/equity.hpp"
#include "holdem/modeling.hpp"
#include "holdem/rng.hpp"

namespace holdem {

struct AgentDecision {
  ActionType action = ActionType::kCall;
  /// Short tag explaining the choice, written to logs.
  std::string rationale;
};

/// One table action as seen by every seat.
struct Observation {
  std::uint64_t hand_id = 0;
  /// Player identity of the acting seat.
  int player = 0;
  ActionEvent event;
  /// Board when the action was taken.
  std::vector<Card> board;
};

/// Common decision interface. An instance belongs to one seat of one table.
class Agent {
 public:
  virtual ~Agent() = default;
  /// Registry name, e.g. "archetype:rock".
  virtual std::string name() const = 0;
  virtual void begin_hand(const PlayerView& /*view*/) {}
  /// Must return an action contained in view.legal.
  virtual AgentDecision decide(const PlayerView& view, Rng& rng) = 0;
  /// Every action at the table, the agent's own included.
  virtual void observe(const Observation& /*obs*/) {}
  virtual void end_hand(const PlayerView& /*view*/, const HandResult& /*result*/) {}
  /// Independent copy including learned state.
  virtual std::unique_ptr<Agent> clone() const = 0;
};

/// Replaces an unavailable choice: raise becomes call, fold with a free check
/// becomes check.
ActionType legalize(ActionType wanted, const LegalActions& legal);

/// Position band from position_index: 0 early, 1 middle, 2 late.
int position_band(int position_index, int players_dealt);
/// Sklansky group with unplayable classes mapped to 9.
int group_or_nine(const HoleCards& hole);

/// EHS for the hero against `opponents` uniform ranges, memoized per hand
/// and street.
class UniformEquity {
 public:
  explicit UniformEquity(EquityConfig config = EquityConfig::play()) : config_(config) {}
  const Strengths& get(const PlayerView& view, Rng& rng);

 private:
  EquityConfig config_;
  std::optional<std::uint64_t> hand_;
  std::size_t board_size_ = 0;
  int opponents_ = 0;
  Strengths cached_;
};

/// Shared threshold rule: raise at ehs >= raise_at, semi-bluff when ppot is
/// high enough, call when ehs covers the pot odds, fold otherwise.
struct ThresholdPolicy {
  double raise_at = 0.8;
  double semi_bluff_ppot = 0.25;

  AgentDecision decide(const Strengths& s, const LegalActions& legal, double pot_odds) const;
};

// ---------------------------------------------------------------------------
// Archetypes

enum class Archetype : std::uint8_t {
  kManiac, kGambler, kFish, kCallingStation, kRock, kWeakTight, kFox, kAce
};
inline constexpr int kNumArchetypes = 8;

struct ArchetypeSpec {
  Archetype kind;
  std::string_view name;   // registry suffix, e.g. "calling_station"
  OpponentType quadrant;
  /// Highest playable Sklansky group per position band (9 plays anything).
  std::array<int, 3> cutoff;
  /// Groups removed from the cutoff when a raise is already in.
  int tighten_facing_raise;
  /// Preflop chance of raising a playable hand; facing a raise.
  double open_raise;
  double reraise;
  /// Postflop: raise at ehs >= raise_at; call when ehs >= pot_odds - call_slack;
  /// bet with chance `bluff` when checked to.
  double raise_at;
  double call_slack;
  double bluff;
};

const std::array<ArchetypeSpec, kNumArchetypes>& archetype_table();
const ArchetypeSpec& archetype_spec(Archetype kind);
const ArchetypeSpec& archetype_spec(std::string_view name);

AgentDecision archetype_decide(const ArchetypeSpec& spec, const PlayerView& view,
                               const Strengths* postflop, Rng& rng);

class ArchetypeAgent : public Agent {
 public:
  explicit ArchetypeAgent(Archetype kind) : spec_(&archetype_spec(kind)) {}
  std::string name() const override;
  AgentDecision decide(const PlayerView& view, Rng& rng) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<ArchetypeAgent>(*this); }
  const ArchetypeSpec& spec() const { return *spec_; }

 private:
  const ArchetypeSpec* spec_;
  UniformEquity equity_;
};

// ---------------------------------------------------------------------------
// Modeling agents

struct ObserverConfig {
  ThresholdPolicy policy;
  ModelingConfig modeling;
  EquityConfig equity = EquityConfig::play();
};

/// Restricted-range EHS: each live opponent's range comes from infer_range on
/// the profile built from everything observed so far.
class ObserverAgent : public Agent {
 public:
  explicit ObserverAgent(ObserverConfig config = {}) : config_(config) {}
  std::string name() const override { return "observer"; }
  void begin_hand(const PlayerView& view) override;
  AgentDecision decide(const PlayerView& view, Rng& rng) override;
  void observe(const Observation& obs) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<ObserverAgent>(*this); }

  const ProfileBook& profiles() const { return book_; }
  /// Ranges the next decision would use, one per live opponent.
  std::vector<WeightTable> opponent_ranges(const PlayerView& view) const;

 private:
  ObserverConfig config_;
  ProfileBook book_;
  UniformEquity uniform_;
};

/// Same decision rule with every opponent assumed uniform.
class EhsThresholdAgent : public Agent {
 public:
  explicit EhsThresholdAgent(ThresholdPolicy policy = {}) : policy_(policy) {}
  std::string name() const override { return "ehs"; }
  AgentDecision decide(const PlayerView& view, Rng& rng) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<EhsThresholdAgent>(*this); }

 private:
  ThresholdPolicy policy_;
  UniformEquity equity_;
};

struct HuBotConfig {
  double t1 = 0.1;
  double t2 = 0.45;
  /// Turn off weight-table updates (the ablation).
  bool reweighting = true;
  ThresholdPolicy policy;
  ModelingConfig modeling;
  EquityConfig equity = EquityConfig::play();
  std::uint64_t income_iterations = 20'000;
};

enum class PreflopPlan : std::uint8_t { kFold, kCall, kRaiseForValue, kCapRaises };

/// EV thresholds from the income-rate table.
PreflopPlan hubot_preflop_plan(double ev, const HuBotConfig& config);
AgentDecision hubot_preflop_decide(const PlayerView& view, const IncomeRateTable& table,
                                   const HuBotConfig& config);

/// Income-rate tables preflop; afterwards EHS against per-opponent weight
/// tables that are narrowed after every opponent call or raise.
class HuBotAgent : public Agent {
 public:
  explicit HuBotAgent(HuBotConfig config = {}) : config_(config) {}
  std::string name() const override { return config_.reweighting ? "hubot" : "hubot:nomodel"; }
  void begin_hand(const PlayerView& view) override;
  AgentDecision decide(const PlayerView& view, Rng& rng) override;
  void observe(const Observation& obs) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<HuBotAgent>(*this); }

  const WeightTable& weights_for(int player) const;
  const ProfileBook& profiles() const { return book_; }

 private:
  HuBotConfig config_;
  ProfileBook book_;
  std::vector<WeightTable> tables_;  // by seat
  std::vector<int> players_;         // seat -> player
  int hero_seat_ = -1;
  std::uint64_t dead_ = 0;
  const IncomeRateTable* preflop_ = nullptr;
};

// ---------------------------------------------------------------------------
// Baselines

class AlwaysCallAgent : public Agent {
 public:
  std::string name() const override { return "alwayscall"; }
  AgentDecision decide(const PlayerView& view, Rng& rng) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<AlwaysCallAgent>(*this); }
};

/// Uniform over the legal set.
class RandomAgent : public Agent {
 public:
  std::string name() const override { return "random"; }
  AgentDecision decide(const PlayerView& view, Rng& rng) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<RandomAgent>(*this); }
};

/// Fixed rule: plays Sklansky groups 1-3 only, raises groups 1-2, then bets
/// made hands with ehs >= 0.85 and calls with pot odds.
class StaticTightAgent : public Agent {
 public:
  std::string name() const override { return "statictight"; }
  AgentDecision decide(const PlayerView& view, Rng& rng) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<StaticTightAgent>(*this); }

 private:
  UniformEquity equity_;
};

}  // namespace holdem
