#pragma once

// Tabular heads-up learners: a table from state (G, P, T, A) to call and raise
// weights, sampled per decision and nudged by a reward matrix.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "holdem/agents.hpp"
#include "holdem/harness.hpp"
#include "holdem/modeling.hpp"

namespace holdem {

enum class LearnerAction : std::uint8_t { kFold, kCall, kRaise };
enum class Judgment : std::uint8_t { kGood, kBad };
enum class SeatRole : std::uint8_t { kBig, kSmall };
/// Last action before the hero's turn; a free check counts as a call.
enum class LastAction : std::uint8_t { kCall, kRaise };

std::string_view learner_action_name(LearnerAction action);

struct LearnerState {
  /// Preflop class bucket, 0 .. buckets - 1.
  int g = 0;
  SeatRole p = SeatRole::kBig;
  OpponentType t = OpponentType::kTightPassive;
  LastAction a = LastAction::kCall;
  friend auto operator<=>(const LearnerState&, const LearnerState&) = default;
};

struct ActionWeights {
  double c = 0.0;
  double r = 0.0;
  friend bool operator==(const ActionWeights&, const ActionWeights&) = default;
};

/// Call if n in [0, C], raise if n in (C, C + R], fold otherwise.
LearnerAction select_action(const ActionWeights& w, double n);

/// One reward step: good fold (-d, -d), call (+d, +2d), raise (-d, +2d); bad
/// fold (+d, +2d), call (-d, -2d), raise (+d, -3d). Each weight is clamped to
/// [0, 1] and both are scaled by 1 / (c + r) when the sum exceeds 1.
ActionWeights reward_step(ActionWeights w, LearnerAction taken, Judgment judgment, double delta);

/// Bucket of a preflop class: the class id for 169 buckets, otherwise
/// id * buckets / 169, which merges neighbouring grid cells.
int class_bucket(PreflopClass cls, int buckets);

class QTable {
 public:
  explicit QTable(double delta = 0.02, std::uint64_t seed = 1, int buckets = 169);

  double delta() const { return delta_; }
  std::uint64_t seed() const { return seed_; }
  int buckets() const { return buckets_; }
  std::size_t size() const { return entries_.size(); }
  const std::map<LearnerState, ActionWeights>& entries() const { return entries_; }

  /// Stored weights, or fresh ones with c ~ U[0,1], r ~ U[0, 1 - c].
  const ActionWeights& lookup_or_init(const LearnerState& state);
  const ActionWeights* find(const LearnerState& state) const;
  /// Throws InvalidInput for a state that was never looked up.
  const ActionWeights& update(const LearnerState& state, LearnerAction taken, Judgment judgment);

  /// Header "delta,<d>,seed,<s>,buckets,<b>", then "g,p,t,a,c,r" rows.
  std::string to_csv() const;
  static QTable from_csv(std::string_view text);
  void save(const std::string& path) const;
  static QTable load(const std::string& path);

  friend bool operator==(const QTable& a, const QTable& b) {
    return a.delta_ == b.delta_ && a.seed_ == b.seed_ && a.buckets_ == b.buckets_ && a.entries_ == b.entries_;
  }

 private:
  void check(const LearnerState& state) const;

  double delta_;
  std::uint64_t seed_;
  int buckets_;
  Rng rng_;
  std::map<LearnerState, ActionWeights> entries_;
};

struct WhsConfig {
  double raise_threshold = 0.6;
};

/// Raise is good iff EHS >= threshold, call iff EHS >= pot odds, fold iff
/// EHS < pot odds.
Judgment judge_whs(LearnerAction taken, double ehs, double pot_odds, const WhsConfig& config = {});
/// Good iff the hand was won; a fold is also good when it cost nothing.
Judgment judge_wh(LearnerAction taken, Chips net);

enum class LearnerKind : std::uint8_t { kWhs, kWh };

struct LearnerConfig {
  LearnerKind kind = LearnerKind::kWhs;
  double delta = 0.02;
  std::uint64_t seed = 1;
  int buckets = 169;
  bool learning = true;
  WhsConfig whs;
  ModelingConfig modeling;
};

/// Heads-up learner. WHS judges each decision as it is made; WH judges every
/// decision of a hand by its outcome when the hand ends.
class LearnerAgent : public Agent {
 public:
  explicit LearnerAgent(LearnerConfig config = {});
  LearnerAgent(LearnerConfig config, QTable table);

  std::string name() const override;
  void begin_hand(const PlayerView& view) override;
  AgentDecision decide(const PlayerView& view, Rng& rng) override;
  void observe(const Observation& obs) override;
  void end_hand(const PlayerView& view, const HandResult& result) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<LearnerAgent>(*this); }

  LearnerState state_of(const PlayerView& view) const;
  const QTable& table() const { return table_; }
  QTable& table() { return table_; }
  void set_learning(bool on) { config_.learning = on; }

 private:
  LearnerConfig config_;
  QTable table_;
  ProfileBook book_;
  UniformEquity equity_;
  std::vector<std::pair<LearnerState, LearnerAction>> pending_;
};

/// Plays heads-up cash hands against a registry opponent with seats swapping
/// every hand; the learner keeps what it learns.
MatchReport train_learner(LearnerAgent& learner, const std::string& opponent, int hands, std::uint64_t seed);

}  // namespace holdem
