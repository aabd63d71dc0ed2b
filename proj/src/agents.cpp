#include "holdem/agents.hpp"

#include <algorithm>

namespace holdem {

ActionType legalize(ActionType wanted, const LegalActions& legal) {
  if (legal.contains(wanted)) return wanted;
  if (wanted == ActionType::kFold && legal.call) return ActionType::kCall;  // free check
  if (wanted == ActionType::kRaise && legal.call) return ActionType::kCall;
  if (legal.fold) return ActionType::kFold;
  throw IllegalAction("no legal action available");
}

int position_band(int position_index, int players_dealt) {
  if (players_dealt <= 1) return 2;
  const double score = static_cast<double>(position_index) / (players_dealt - 1);
  if (score < 1.0 / 3) return 0;
  if (score < 2.0 / 3) return 1;
  return 2;
}

int group_or_nine(const HoleCards& hole) {
  return sklansky_group(canonical_class(hole)).value_or(9);
}

const Strengths& UniformEquity::get(const PlayerView& view, Rng& rng) {
  const int opponents = std::max(1, view.active_players - 1);
  if (hand_ && *hand_ == view.hand_id && board_size_ == view.board.size() && opponents_ == opponents) {
    return cached_;
  }
  cached_ = effective_hand_strength(view.hole, view.board, WeightTable::uniform(), opponents,
                                    config_, rng);
  hand_ = view.hand_id;
  board_size_ = view.board.size();
  opponents_ = opponents;
  return cached_;
}

AgentDecision ThresholdPolicy::decide(const Strengths& s, const LegalActions& legal,
                                      double pot_odds) const {
  if (s.ehs >= raise_at && legal.raise) return {ActionType::kRaise, "value"};
  if (s.ppot >= semi_bluff_ppot && legal.raise) return {ActionType::kRaise, "semi-bluff"};
  if (legal.to_call == 0) return {ActionType::kCall, "check"};
  if (s.ehs >= pot_odds) return {ActionType::kCall, "pot-odds"};
  return {ActionType::kFold, "weak"};
}

// ---------------------------------------------------------------------------

const std::array<ArchetypeSpec, kNumArchetypes>& archetype_table() {
  using T = OpponentType;
  // kind, name, quadrant, cutoff{early,middle,late}, tighten, open, reraise,
  // raise_at, call_slack, bluff
  static const std::array<ArchetypeSpec, kNumArchetypes> table = {{
      {Archetype::kManiac, "maniac", T::kLooseAggressive, {9, 9, 9}, 0, 1.0, 1.0, 0.0, 1.0, 1.0},
      {Archetype::kGambler, "gambler", T::kLooseAggressive, {7, 8, 9}, 1, 0.6, 0.4, 0.55, 0.10, 0.25},
      {Archetype::kFish, "fish", T::kLoosePassive, {6, 7, 8}, 0, 0.1, 0.05, 0.85, 0.15, 0.0},
      {Archetype::kCallingStation, "calling_station", T::kLoosePassive, {7, 8, 9}, 0, 0.0, 0.0, 2.0, 1.0, 0.0},
      {Archetype::kRock, "rock", T::kTightPassive, {2, 3, 3}, 1, 0.3, 0.2, 0.9, 0.0, 0.0},
      {Archetype::kWeakTight, "weak_tight", T::kTightPassive, {3, 4, 5}, 2, 0.1, 0.0, 0.9, -0.1, 0.0},
      {Archetype::kFox, "fox", T::kTightAggressive, {4, 5, 6}, 1, 0.7, 0.4, 0.7, 0.0, 0.1},
      {Archetype::kAce, "ace", T::kTightAggressive, {3, 4, 5}, 1, 0.9, 0.6, 0.65, 0.02, 0.05},
  }};
  return table;
}

const ArchetypeSpec& archetype_spec(Archetype kind) {
  return archetype_table()[static_cast<int>(kind)];
}

const ArchetypeSpec& archetype_spec(std::string_view name) {
  for (const auto& spec : archetype_table()) {
    if (spec.name == name) return spec;
  }
  throw InvalidInput("unknown archetype '" + std::string(name) + "'");
}

AgentDecision archetype_decide(const ArchetypeSpec& spec, const PlayerView& view,
                               const Strengths* postflop, Rng& rng) {
  const LegalActions& legal = view.legal;
  if (view.street == Street::kPreflop) {
    const int band = position_band(view.position_index, view.players_dealt);
    const int cutoff = spec.cutoff[band] - (view.facing_raise ? spec.tighten_facing_raise : 0);
    if (group_or_nine(view.hole) > cutoff) {
      return {legalize(ActionType::kFold, legal), "unplayable"};
    }
    const double p = view.facing_raise ? spec.reraise : spec.open_raise;
    if (legal.raise && p > 0 && rng.chance(p)) return {ActionType::kRaise, "playable-raise"};
    return {ActionType::kCall, "playable"};
  }
  if (spec.raise_at <= 0.0) {
    return {legalize(ActionType::kRaise, legal), "always-raise"};
  }
  if (spec.raise_at > 1.0 && spec.call_slack >= 1.0) return {ActionType::kCall, "always-call"};
  const Strengths& s = *postflop;
  if (s.ehs >= spec.raise_at && legal.raise) return {ActionType::kRaise, "value"};
  if (legal.to_call == 0) {
    if (spec.bluff > 0 && legal.raise && rng.chance(spec.bluff)) return {ActionType::kRaise, "bluff"};
    return {ActionType::kCall, "check"};
  }
  if (s.ehs >= view.pot_odds() - spec.call_slack) return {ActionType::kCall, "pot-odds"};
  return {ActionType::kFold, "weak"};
}

std::string ArchetypeAgent::name() const { return "archetype:" + std::string(spec_->name); }

AgentDecision ArchetypeAgent::decide(const PlayerView& view, Rng& rng) {
  const bool needs_equity = view.street != Street::kPreflop && spec_->raise_at > 0.0 &&
                            !(spec_->raise_at > 1.0 && spec_->call_slack >= 1.0);
  const Strengths* s = needs_equity ? &equity_.get(view, rng) : nullptr;
  return archetype_decide(*spec_, view, s, rng);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<int> dealt_players(const PlayerView& view, bool include_hero) {
  std::vector<int> out;
  for (const auto& seat : view.seats) {
    if (seat.in_hand && (include_hero || seat.seat != view.hero)) out.push_back(view.player_at(seat.seat));
  }
  return out;
}

bool all_uniform(std::span<const WeightTable> ranges) {
  const WeightTable uniform;
  return std::all_of(ranges.begin(), ranges.end(), [&](const WeightTable& r) { return r == uniform; });
}

Strengths joint_strengths(const PlayerView& view, std::span<const WeightTable> ranges,
                          const EquityConfig& config, Rng& rng) {
  try {
    return effective_hand_strength(view.hole, view.board, ranges, config, rng);
  } catch (const DegenerateRange&) {
    return effective_hand_strength(view.hole, view.board, WeightTable::uniform(),
                                   static_cast<int>(ranges.size()), config, rng);
  }
}

}  // namespace

void ObserverAgent::begin_hand(const PlayerView& view) {
  book_.begin_hand(view.hand_id, dealt_players(view, false));
}

void ObserverAgent::observe(const Observation& obs) { book_.observe(obs.player, obs.hand_id, obs.event); }

std::vector<WeightTable> ObserverAgent::opponent_ranges(const PlayerView& view) const {
  const IncomeRateTable& order = cached_income_table(2);
  std::vector<WeightTable> out;
  for (const auto& seat : view.seats) {
    if (!seat.in_hand || seat.folded || seat.seat == view.hero) continue;
    const OpponentProfile* p = book_.find(view.player_at(seat.seat));
    out.push_back(p ? infer_range(*p, order, config_.modeling) : WeightTable::uniform());
  }
  return out;
}

AgentDecision ObserverAgent::decide(const PlayerView& view, Rng& rng) {
  const auto ranges = opponent_ranges(view);
  const Strengths s = all_uniform(ranges) ? uniform_.get(view, rng)
                                          : joint_strengths(view, ranges, config_.equity, rng);
  return config_.policy.decide(s, view.legal, view.pot_odds());
}

AgentDecision EhsThresholdAgent::decide(const PlayerView& view, Rng& rng) {
  return policy_.decide(equity_.get(view, rng), view.legal, view.pot_odds());
}

// ---------------------------------------------------------------------------

PreflopPlan hubot_preflop_plan(double ev, const HuBotConfig& config) {
  if (ev < 0.0) return PreflopPlan::kFold;
  if (ev < config.t1) return PreflopPlan::kCall;
  if (ev < config.t2) return PreflopPlan::kRaiseForValue;
  return PreflopPlan::kCapRaises;
}

AgentDecision hubot_preflop_decide(const PlayerView& view, const IncomeRateTable& table,
                                   const HuBotConfig& config) {
  if (table.players != view.players_dealt) {
    throw InvalidInput("income-rate table for " + std::to_string(view.players_dealt) +
                       " players required, got " + std::to_string(table.players));
  }
  const double ev = table.ev_of(canonical_class(view.hole));
  const LegalActions& legal = view.legal;
  switch (hubot_preflop_plan(ev, config)) {
    case PreflopPlan::kFold:
      return {legalize(ActionType::kFold, legal), legal.to_call == 0 ? "free-play" : "negative-ev"};
    case PreflopPlan::kCall:
      return {ActionType::kCall, "marginal-ev"};
    case PreflopPlan::kRaiseForValue:
      if (!view.facing_raise && legal.raise) return {ActionType::kRaise, "raise-for-value"};
      return {ActionType::kCall, "raise-for-value"};
    case PreflopPlan::kCapRaises:
      return {legalize(ActionType::kRaise, legal), "cap"};
  }
  return {ActionType::kCall, ""};
}

void HuBotAgent::begin_hand(const PlayerView& view) {
  preflop_ = &cached_income_table(view.players_dealt, config_.income_iterations);
  hero_seat_ = view.hero;
  dead_ = view.hole.mask();
  tables_.assign(view.seats.size(), WeightTable::uniform());
  players_.assign(view.seats.size(), -1);
  for (const auto& seat : view.seats) {
    players_[seat.seat] = view.player_at(seat.seat);
    tables_[seat.seat].remove_dead(dead_);
  }
  book_.begin_hand(view.hand_id, dealt_players(view, false));
}

void HuBotAgent::observe(const Observation& obs) {
  if (obs.event.seat == hero_seat_) return;
  book_.observe(obs.player, obs.hand_id, obs.event);
  if (!config_.reweighting || obs.event.action == ActionType::kFold || preflop_ == nullptr) return;
  const auto seat = static_cast<std::size_t>(obs.event.seat);
  if (seat >= tables_.size()) return;
  const std::uint64_t dead = dead_ | card_mask(obs.board);
  tables_[seat] = reweight(tables_[seat], obs.event, book_[obs.player], obs.board, dead, *preflop_,
                           config_.modeling)
                      .table;
}

const WeightTable& HuBotAgent::weights_for(int player) const {
  for (std::size_t s = 0; s < players_.size(); ++s) {
    if (players_[s] == player) return tables_[s];
  }
  throw InvalidInput("player not seated in the current hand");
}

AgentDecision HuBotAgent::decide(const PlayerView& view, Rng& rng) {
  if (preflop_ == nullptr || hero_seat_ != view.hero) begin_hand(view);
  if (view.street == Street::kPreflop) return hubot_preflop_decide(view, *preflop_, config_);
  std::vector<WeightTable> ranges;
  for (const auto& seat : view.seats) {
    if (seat.in_hand && !seat.folded && seat.seat != view.hero) ranges.push_back(tables_[seat.seat]);
  }
  const Strengths s = joint_strengths(view, ranges, config_.equity, rng);
  return config_.policy.decide(s, view.legal, view.pot_odds());
}

// ---------------------------------------------------------------------------

AgentDecision AlwaysCallAgent::decide(const PlayerView&, Rng&) { return {ActionType::kCall, "always"}; }

AgentDecision RandomAgent::decide(const PlayerView& view, Rng& rng) {
  const auto options = view.legal.list();
  return {options[rng.below(options.size())], "random"};
}

AgentDecision StaticTightAgent::decide(const PlayerView& view, Rng& rng) {
  const LegalActions& legal = view.legal;
  if (view.street == Street::kPreflop) {
    const int group = group_or_nine(view.hole);
    if (group <= 2) return {legalize(ActionType::kRaise, legal), "premium"};
    if (group == 3) return {ActionType::kCall, "playable"};
    return {legalize(ActionType::kFold, legal), "unplayable"};
  }
  const Strengths& s = equity_.get(view, rng);
  if (s.ehs >= 0.85 && legal.raise) return {ActionType::kRaise, "value"};
  if (legal.to_call == 0 || s.ehs >= view.pot_odds()) return {ActionType::kCall, "pot-odds"};
  return {ActionType::kFold, "weak"};
}

}  // namespace holdem
