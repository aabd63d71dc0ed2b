#include "holdem/pokerlang.hpp"

#include <algorithm>

namespace holdem::pokerlang {

namespace {

constexpr std::size_t kImageWindow = 50;

double require(const auto& value, Term term, std::string_view what) {
  if (!value) {
    throw EvaluationError(std::string(term_name(term)) + ": " + std::string(what) + " is not available");
  }
  return static_cast<double>(*value);
}

// Numeric value of a term; symbolic terms give their ordinal.
double term_value(Term term, const Inputs& in) {
  switch (term) {
    case Term::kNumberOfPlayers: return require(in.number_of_players, term, "player count");
    case Term::kStack: return require(in.stack_bb, term, "stack");
    case Term::kPotOdds: return require(in.pot_odds, term, "pot odds");
    case Term::kHandRegion: return hand_region(require(in.ehs, term, "hand strength"));
    case Term::kPositionAtTable: return require(in.position_band, term, "position");
    case Term::kImpliedOdds:
      return require(in.pot_odds, term, "pot odds") * (1.0 - require(in.ppot, term, "positive potential"));
    case Term::kOpponentHand: return require(in.opponent_hand, term, "opponent model");
    case Term::kOpponentInGame: return require(in.opponents_in_game, term, "opponent count");
    case Term::kStealBet: return require(in.steal_bet, term, "steal situation");
    case Term::kImageAtTable: return require(in.image, term, "own image");
  }
  return 0.0;
}

double literal(Term term, const Value& v) {
  if (!v.symbolic) return v.number;
  const auto& syms = term_symbols(term);
  return static_cast<double>(std::find(syms.begin(), syms.end(), v.symbol) - syms.begin());
}

ActionType check_or_fold(const LegalActions& legal) { return legalize(ActionType::kFold, legal); }

// Calls with money in after the first raise of the current round, by others.
int callers_after_raise(const PlayerView& view) {
  bool raised = false;
  int callers = 0;
  for (const auto& e : view.history) {
    if (e.street != view.street) continue;
    if (e.action == ActionType::kRaise) {
      if (raised) return 0;  // already re-raised
      raised = true;
    } else if (raised && e.action == ActionType::kCall && e.amount > 0 && e.seat != view.hero) {
      ++callers;
    }
  }
  return callers;
}

void visit_conditions(const TacticDef& d, auto&& f) {
  for (const auto& b : d.behaviours)
    for (const auto& r : b.rules)
      for (const auto& c : r.conditions) f(c);
}

}  // namespace

int hand_region(double ehs) {
  if (ehs < 0.2) return 0;
  if (ehs < 0.4) return 1;
  if (ehs < 0.6) return 2;
  if (ehs < 0.8) return 3;
  return 4;
}

int image_bucket(double af) {
  if (af < 1.0) return 0;
  if (af < 2.0) return 1;
  return 2;
}

bool holds(const Condition& c, const Inputs& inputs) {
  const double x = term_value(c.term, inputs);
  auto v = [&](std::size_t i) { return literal(c.term, c.values[i]); };
  switch (c.op) {
    case Op::kInterval: return v(0) <= x && x <= v(1);
    case Op::kSet:
      for (std::size_t i = 0; i < c.values.size(); ++i) {
        if (x == v(i)) return true;
      }
      return false;
    case Op::kLt: return x < v(0);
    case Op::kLe: return x <= v(0);
    case Op::kGt: return x > v(0);
    case Op::kGe: return x >= v(0);
    case Op::kEq: return x == v(0);
  }
  return false;
}

bool holds_all(const std::vector<Condition>& conditions, const Inputs& inputs) {
  return std::all_of(conditions.begin(), conditions.end(), [&](const Condition& c) { return holds(c, inputs); });
}

Needs needs_of(const Program& program) {
  Needs n;
  auto term = [&](const Condition& c) {
    if (c.term == Term::kHandRegion || c.term == Term::kImpliedOdds) n.strength = true;
    if (c.term == Term::kOpponentHand) n.opponent_hand = true;
  };
  auto tactic = [&](const TacticDef& d) {
    visit_conditions(d, term);
    for (const auto& b : d.behaviours)
      for (const auto& r : b.rules)
        for (const auto& a : r.actions) n.strength |= a.kind == ActionKind::kSemiBluff;
  };
  for (const auto& e : program.strategy) {
    for (const auto& c : e.conditions) term(c);
    if (e.tactic.form == TacticRef::Form::kPredefined) n.strength = true;
    if (e.tactic.form == TacticRef::Form::kInline) tactic(*e.tactic.definition);
  }
  for (const auto& d : program.tactics) tactic(d);
  return n;
}

std::optional<std::size_t> select_entry(const Program& program, const Inputs& inputs) {
  for (std::size_t i = 0; i < program.strategy.size(); ++i) {
    if (holds_all(program.strategy[i].conditions, inputs)) return i;
  }
  return std::nullopt;
}

std::optional<ActionKind> sample_action(const TacticDef& tactic, const Inputs& inputs, Rng& rng) {
  std::vector<const Rule*> rules;
  std::vector<double> weights;
  double total = 0;
  for (const auto& b : tactic.behaviours) {
    for (const auto& r : b.rules) {
      if (holds_all(r.conditions, inputs)) {
        rules.push_back(&r);
        weights.push_back(b.value);
        total += b.value;
        break;
      }
    }
  }
  if (rules.empty()) return std::nullopt;
  const Rule* rule = rules.back();
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (u < weights[i]) {
      rule = rules[i];
      break;
    }
    u -= weights[i];
  }
  double p = rng.uniform() * 100.0;
  for (const auto& a : rule->actions) {
    if (p < a.percent) return a.kind;
    p -= a.percent;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Macros: an opening move, then a follow-up for the rest of the betting round.

MacroPlan::MacroPlan(ActionKind kind, std::uint64_t hand_id, Street street)
    : kind_(kind), hand_id_(hand_id), street_(street) {
  if (!is_macro(kind)) throw InvalidInput("not a macro action");
}

bool MacroPlan::active_for(const PlayerView& view) const {
  return view.hand_id == hand_id_ && view.street == street_;
}

ActionType MacroPlan::next(const PlayerView& view, const Inputs& inputs) {
  const LegalActions& legal = view.legal;
  const bool facing = legal.to_call > 0;
  auto commit = [&](ActionType a) {
    phase_ = Phase::kCommitted;
    return legalize(a, legal);
  };
  auto decline = [&] {
    phase_ = Phase::kDeclined;
    return check_or_fold(legal);
  };
  if (phase_ == Phase::kDeclined) return check_or_fold(legal);
  const bool open = phase_ == Phase::kOpen;
  switch (kind_) {
    case ActionKind::kStealThePot:
      if (open) return commit(ActionType::kRaise);
      return check_or_fold(legal);
    case ActionKind::kPostOakBluff:
      if (open) return facing ? decline() : commit(ActionType::kRaise);
      return check_or_fold(legal);
    case ActionKind::kSemiBluff:
      if (open) {
        const double hs = inputs.hs.value_or(inputs.ehs.value_or(1.0));
        const bool draw = inputs.ppot.value_or(0.0) >= 0.2 && hs < 0.5;
        return draw ? commit(ActionType::kRaise) : decline();
      }
      return legalize(ActionType::kCall, legal);
    case ActionKind::kCheckRaiseBluff:
    case ActionKind::kCheckRaiseTrap:
      if (open) return facing ? commit(ActionType::kRaise) : ActionType::kCall;
      return kind_ == ActionKind::kCheckRaiseTrap ? legalize(ActionType::kCall, legal) : check_or_fold(legal);
    case ActionKind::kSqueezePlay:
      if (open) return view.facing_raise && callers_after_raise(view) > 0 ? commit(ActionType::kRaise) : decline();
      return check_or_fold(legal);
    case ActionKind::kCheckCallTrap:
      return legalize(ActionType::kCall, legal);
    default:
      return check_or_fold(legal);
  }
}

// ---------------------------------------------------------------------------

PokerLangAgent::PokerLangAgent(std::shared_ptr<const Program> program, std::string name)
    : program_(std::move(program)), name_(std::move(name)), needs_(needs_of(*program_)) {}

void PokerLangAgent::begin_hand(const PlayerView& view) {
  hero_player_ = view.player_at(view.hero);
  std::vector<int> others;
  for (const auto& seat : view.seats) {
    if (seat.in_hand && seat.seat != view.hero) others.push_back(view.player_at(seat.seat));
  }
  book_.begin_hand(view.hand_id, others);
  plan_.reset();
}

void PokerLangAgent::observe(const Observation& obs) {
  if (obs.player == hero_player_) {
    const auto& e = obs.event;
    if (e.action == ActionType::kRaise || (e.action == ActionType::kCall && e.amount > 0)) {
      recent_.push_back(e.action == ActionType::kRaise);
      if (recent_.size() > kImageWindow) recent_.erase(recent_.begin());
    }
    return;
  }
  book_.observe(obs.player, obs.hand_id, obs.event);
}

Inputs PokerLangAgent::inputs(const PlayerView& view, Rng& rng) {
  Inputs in;
  in.number_of_players = view.active_players;
  in.opponents_in_game = view.active_players - 1;
  in.stack_bb = static_cast<double>(view.seats[view.hero].stack) / static_cast<double>(view.config.big_blind);
  in.pot_odds = view.pot_odds();
  in.position_band = position_band(view.position_index, view.players_dealt);
  const bool unopened = std::all_of(view.history.begin(), view.history.end(),
                                    [](const ActionEvent& e) { return e.action == ActionType::kFold; });
  in.steal_bet = view.street == Street::kPreflop && unopened && *in.position_band == 2;
  if (recent_.empty()) {
    in.image = 1;
  } else {
    const auto raises = static_cast<int>(std::count(recent_.begin(), recent_.end(), true));
    in.image = image_bucket(aggression_factor(raises, static_cast<int>(recent_.size()) - raises));
  }
  if (needs_.strength) {
    const Strengths& s = equity_.get(view, rng);
    in.hs = s.hs;
    in.ehs = s.ehs;
    in.ppot = s.ppot;
  }
  if (needs_.opponent_hand) {
    const ModelingConfig cfg;
    double tightest = 1.0;
    for (const auto& seat : view.seats) {
      if (!seat.in_hand || seat.folded || seat.seat == view.hero) continue;
      const OpponentProfile* p = book_.find(view.player_at(seat.seat));
      if (p && p->hands_observed() >= cfg.warmup_hands) tightest = std::min(tightest, std::clamp(p->vpip(), 0.05, 1.0));
    }
    in.opponent_hand = 1.0 - tightest / 2.0;
  }
  return in;
}

AgentDecision PokerLangAgent::decide(const PlayerView& view, Rng& rng) {
  const Inputs in = inputs(view, rng);
  if (plan_ && plan_->active_for(view)) {
    return {plan_->next(view, in), "macro:" + std::string(action_kind_name(plan_->kind()))};
  }
  plan_.reset();
  const auto entry = select_entry(*program_, in);
  if (!entry) return {check_or_fold(view.legal), "no-entry"};
  const TacticRef& ref = program_->strategy[*entry].tactic;
  if (ref.form == TacticRef::Form::kPredefined) {
    const ArchetypeSpec& spec = archetype_spec(predefined_archetype(ref.predefined));
    const Strengths* s = view.street == Street::kPreflop ? nullptr : &equity_.get(view, rng);
    AgentDecision d = archetype_decide(spec, view, s, rng);
    d.rationale = std::string(predefined_name(ref.predefined)) + ":" + d.rationale;
    return d;
  }
  const TacticDef* tactic = ref.form == TacticRef::Form::kInline ? &*ref.definition : program_->find_tactic(ref.name);
  const auto kind = sample_action(*tactic, in, rng);
  if (!kind) return {check_or_fold(view.legal), tactic->name + ":remainder"};
  const std::string why = tactic->name + ":" + std::string(action_kind_name(*kind));
  switch (*kind) {
    case ActionKind::kFold: return {check_or_fold(view.legal), why};
    case ActionKind::kCall: return {legalize(ActionType::kCall, view.legal), why};
    case ActionKind::kRaise: return {legalize(ActionType::kRaise, view.legal), why};
    default:
      plan_.emplace(*kind, view.hand_id, view.street);
      return {plan_->next(view, in), "macro:" + std::string(action_kind_name(*kind))};
  }
}

}  // namespace holdem::pokerlang
