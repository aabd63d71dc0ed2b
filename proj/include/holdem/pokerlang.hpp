#pragma once

// PokerLANG: strategy files (.pkl) with activation conditions, tactics built
// from weighted behaviours and rules, and round-scoped action macros. The
// concrete syntax is described in docs/pokerlang.md.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holdem/agents.hpp"

namespace holdem::pokerlang {

/// 1-based source position. Never affects AST equality.
struct Position {
  int line = 0;
  int column = 0;
  friend bool operator==(const Position&, const Position&) { return true; }
};

struct Diagnostic {
  Position pos;
  std::string message;
  /// "<file>:<line>:<col>: <message>"
  std::string str(std::string_view file) const;
};

/// Lexical, syntax or resolution errors; at least one diagnostic.
class ParseError : public InvalidInput {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// A view input a condition needs is not available.
class EvaluationError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

enum class Term : std::uint8_t {
  // evaluators
  kNumberOfPlayers, kStack, kPotOdds, kHandRegion, kPositionAtTable,
  // predictors
  kImpliedOdds, kOpponentHand, kOpponentInGame, kStealBet, kImageAtTable,
};
inline constexpr int kNumTerms = 10;

std::string_view term_name(Term term);
bool is_predictor(Term term);
/// Ordered symbol domain for symbolic terms; empty for numeric ones.
const std::vector<std::string_view>& term_symbols(Term term);

enum class Op : std::uint8_t { kInterval, kSet, kLt, kLe, kGt, kGe, kEq };

/// A number, or a symbol from the term's domain.
struct Value {
  bool symbolic = false;
  double number = 0.0;
  std::string symbol;
  friend bool operator==(const Value&, const Value&) = default;
};

struct Condition {
  Term term = Term::kPotOdds;
  Op op = Op::kEq;
  /// Two bounds for an interval, one or more members for a set, else one.
  std::vector<Value> values;
  Position pos;
  friend bool operator==(const Condition&, const Condition&) = default;
};

enum class ActionKind : std::uint8_t {
  kFold, kCall, kRaise,
  kStealThePot, kSemiBluff, kCheckRaiseBluff, kSqueezePlay, kCheckCallTrap, kCheckRaiseTrap,
  kPostOakBluff,
};
inline constexpr int kNumActionKinds = 10;

std::string_view action_kind_name(ActionKind kind);
bool is_macro(ActionKind kind);

struct ActionItem {
  ActionKind kind = ActionKind::kCall;
  /// Percentage in (0, 100].
  double percent = 100.0;
  Position pos;
  friend bool operator==(const ActionItem&, const ActionItem&) = default;
};

struct Rule {
  std::vector<Condition> conditions;
  std::vector<ActionItem> actions;
  Position pos;
  friend bool operator==(const Rule&, const Rule&) = default;
};

struct Behaviour {
  /// Selection weight, > 0.
  double value = 1.0;
  std::vector<Rule> rules;
  Position pos;
  friend bool operator==(const Behaviour&, const Behaviour&) = default;
};

struct TacticDef {
  std::string name;
  std::vector<Behaviour> behaviours;
  Position pos;
  friend bool operator==(const TacticDef&, const TacticDef&) = default;
};

enum class Predefined : std::uint8_t { kLooseAggressive, kLoosePassive, kTightAggressive, kTightPassive };

std::string_view predefined_name(Predefined tactic);
/// Archetype that plays a predefined tactic.
Archetype predefined_archetype(Predefined tactic);

struct TacticRef {
  enum class Form : std::uint8_t { kPredefined, kNamed, kInline };
  Form form = Form::kPredefined;
  Predefined predefined = Predefined::kTightAggressive;
  /// kNamed: a top-level tactic.
  std::string name;
  /// kInline: defined in place.
  std::optional<TacticDef> definition;
  friend bool operator==(const TacticRef&, const TacticRef&) = default;
};

struct Entry {
  /// Evaluators only; empty means always active.
  std::vector<Condition> conditions;
  TacticRef tactic;
  Position pos;
  friend bool operator==(const Entry&, const Entry&) = default;
};

struct Program {
  std::vector<Entry> strategy;
  std::vector<TacticDef> tactics;
  friend bool operator==(const Program&, const Program&) = default;

  /// Named or inline definition; nullptr if absent.
  const TacticDef* find_tactic(std::string_view name) const;
};

/// Throws ParseError.
Program parse(std::string_view text);
Program parse_file(const std::string& path);
/// Canonical text; parse(format(p)) == p.
std::string format(const Program& program);
/// Warnings: percentages over 100 in a rule, tactics without rules,
/// entries after an unconditional one.
std::vector<Diagnostic> validate(const Program& program);

/// Inputs for conditions. Missing values raise EvaluationError when a
/// condition needs them.
struct Inputs {
  std::optional<int> number_of_players;
  std::optional<double> stack_bb;
  std::optional<double> pot_odds;
  std::optional<double> hs;
  std::optional<double> ehs;
  std::optional<double> ppot;
  /// 0 early, 1 middle, 2 late.
  std::optional<int> position_band;
  /// Mean strength percentile of the tightest live opponent's range.
  std::optional<double> opponent_hand;
  std::optional<int> opponents_in_game;
  std::optional<bool> steal_bet;
  /// 0 passive, 1 neutral, 2 aggressive.
  std::optional<int> image;
};

/// Hand region index (trash .. monster) for an EHS value.
int hand_region(double ehs);
/// Image bucket for an aggression factor.
int image_bucket(double af);

bool holds(const Condition& condition, const Inputs& inputs);
bool holds_all(const std::vector<Condition>& conditions, const Inputs& inputs);

/// Which inputs a program can ever read.
struct Needs {
  bool strength = false;
  bool opponent_hand = false;
};
Needs needs_of(const Program& program);

/// Index of the first active entry, if any.
std::optional<std::size_t> select_entry(const Program& program, const Inputs& inputs);

/// Picks a rule (behaviours weighted by value, first matching rule within
/// each) and samples an action from it; nullopt means the remainder, which
/// plays check-if-free-else-fold.
std::optional<ActionKind> sample_action(const TacticDef& tactic, const Inputs& inputs, Rng& rng);

/// Round-scoped state machine behind a macro.
class MacroPlan {
 public:
  MacroPlan(ActionKind kind, std::uint64_t hand_id, Street street);
  ActionKind kind() const { return kind_; }
  bool active_for(const PlayerView& view) const;
  /// Next concrete action; always legal for `view`.
  ActionType next(const PlayerView& view, const Inputs& inputs);

 private:
  ActionKind kind_;
  std::uint64_t hand_id_;
  Street street_;
  enum class Phase : std::uint8_t { kOpen, kCommitted, kDeclined };
  Phase phase_ = Phase::kOpen;
};

/// Plays a PokerLANG program.
class PokerLangAgent : public Agent {
 public:
  PokerLangAgent(std::shared_ptr<const Program> program, std::string name);
  std::string name() const override { return name_; }
  void begin_hand(const PlayerView& view) override;
  AgentDecision decide(const PlayerView& view, Rng& rng) override;
  void observe(const Observation& obs) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<PokerLangAgent>(*this); }

  /// Inputs for the current decision.
  Inputs inputs(const PlayerView& view, Rng& rng);

 private:
  std::shared_ptr<const Program> program_;
  std::string name_;
  Needs needs_;
  ProfileBook book_;
  std::optional<MacroPlan> plan_;
  UniformEquity equity_;
  /// Own recent raises (true) and paid calls (false).
  std::vector<bool> recent_;
  int hero_player_ = -1;
};

}  // namespace holdem::pokerlang
