#include "holdem/learner.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "holdem/registry.hpp"
#include "holdem/text.hpp"

namespace holdem {

std::string_view learner_action_name(LearnerAction action) {
  switch (action) {
    case LearnerAction::kFold: return "fold";
    case LearnerAction::kCall: return "call";
    case LearnerAction::kRaise: return "raise";
  }
  return "?";
}

LearnerAction select_action(const ActionWeights& w, double n) {
  if (n <= w.c) return LearnerAction::kCall;
  if (n <= w.c + w.r) return LearnerAction::kRaise;
  return LearnerAction::kFold;
}

ActionWeights reward_step(ActionWeights w, LearnerAction taken, Judgment judgment, double delta) {
  // Steps in units of delta, indexed [judgment][action] = {dc, dr}.
  static constexpr int kSteps[2][3][2] = {
      {{-1, -1}, {+1, +2}, {-1, +2}},
      {{+1, +2}, {-1, -2}, {+1, -3}},
  };
  const auto& s = kSteps[static_cast<int>(judgment)][static_cast<int>(taken)];
  w.c = std::clamp(w.c + s[0] * delta, 0.0, 1.0);
  w.r = std::clamp(w.r + s[1] * delta, 0.0, 1.0);
  const double sum = w.c + w.r;
  if (sum > 1.0) {
    w.c /= sum;
    w.r /= sum;
    // Rounding can leave the sum a hair above one.
    if (w.c + w.r > 1.0) w.r = 1.0 - w.c;
  }
  return w;
}

int class_bucket(PreflopClass cls, int buckets) {
  if (buckets == 169) return cls.id();
  return cls.id() * buckets / 169;
}

QTable::QTable(double delta, std::uint64_t seed, int buckets)
    : delta_(delta), seed_(seed), buckets_(buckets), rng_(seed) {
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidInput("learner: delta must be in (0, 1]");
  if (buckets < 1 || buckets > 169) throw InvalidInput("learner: buckets must be in 1..169");
}

void QTable::check(const LearnerState& s) const {
  if (s.g < 0 || s.g >= buckets_) throw InvalidInput("learner: class bucket out of range");
  if (static_cast<int>(s.p) > 1 || static_cast<int>(s.a) > 1 ||
      static_cast<int>(s.t) >= kNumOpponentTypes) {
    throw InvalidInput("learner: state component out of range");
  }
}

const ActionWeights& QTable::lookup_or_init(const LearnerState& state) {
  check(state);
  auto it = entries_.find(state);
  if (it != entries_.end()) return it->second;
  ActionWeights w;
  w.c = rng_.uniform();
  w.r = rng_.uniform() * (1.0 - w.c);
  return entries_.emplace(state, w).first->second;
}

const ActionWeights* QTable::find(const LearnerState& state) const {
  auto it = entries_.find(state);
  return it == entries_.end() ? nullptr : &it->second;
}

const ActionWeights& QTable::update(const LearnerState& state, LearnerAction taken, Judgment judgment) {
  auto it = entries_.find(state);
  if (it == entries_.end()) throw InvalidInput("learner: update of a state that is not in the table");
  it->second = reward_step(it->second, taken, judgment, delta_);
  return it->second;
}

std::string QTable::to_csv() const {
  std::string out = "delta," + format_double(delta_) + ",seed," + std::to_string(seed_) + ",buckets," +
                    std::to_string(buckets_) + "\ng,p,t,a,c,r\n";
  for (const auto& [s, w] : entries_) {
    out += std::to_string(s.g);
    out += s.p == SeatRole::kBig ? ",big," : ",small,";
    out += type_name(s.t);
    out += s.a == LastAction::kCall ? ",call," : ",raise,";
    out += format_double(w.c) + "," + format_double(w.r) + "\n";
  }
  return out;
}

QTable QTable::from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) -> InvalidInput {
    return InvalidInput("checkpoint line " + std::to_string(line_no) + ": " + msg);
  };
  ++line_no;
  if (!std::getline(in, line)) throw fail("missing header");
  const auto head = split(trim(line), ',');
  if (head.size() != 6 || head[0] != "delta" || head[2] != "seed" || head[4] != "buckets") {
    throw fail("expected 'delta,<d>,seed,<s>,buckets,<b>'");
  }
  QTable table(parse_double(head[1]), static_cast<std::uint64_t>(parse_int(head[3])),
               static_cast<int>(parse_int(head[5])));
  ++line_no;
  if (!std::getline(in, line) || trim(line) != "g,p,t,a,c,r") throw fail("expected 'g,p,t,a,c,r'");
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    if (f.size() != 6) throw fail("expected 6 fields");
    try {
      LearnerState s;
      s.g = static_cast<int>(parse_int(f[0]));
      if (f[1] == "big") s.p = SeatRole::kBig;
      else if (f[1] == "small") s.p = SeatRole::kSmall;
      else throw InvalidInput("bad seat role '" + f[1] + "'");
      s.t = parse_type(f[2]);
      if (f[3] == "call") s.a = LastAction::kCall;
      else if (f[3] == "raise") s.a = LastAction::kRaise;
      else throw InvalidInput("bad last action '" + f[3] + "'");
      table.check(s);
      const ActionWeights w{parse_double(f[4]), parse_double(f[5])};
      if (w.c < 0 || w.r < 0 || w.c + w.r > 1.0) throw InvalidInput("weights violate c + r <= 1");
      if (!table.entries_.emplace(s, w).second) throw InvalidInput("duplicate state");
    } catch (const InvalidInput& e) {
      throw fail(e.what());
    }
  }
  // Later initializations continue from a stream that depends on the table.
  table.rng_ = Rng(table.seed_ ^ (0x9e3779b97f4a7c15ull * (table.entries_.size() + 1)));
  return table;
}

void QTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << to_csv();
}

QTable QTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return from_csv(ss.str());
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

Judgment judge_whs(LearnerAction taken, double ehs, double pot_odds, const WhsConfig& config) {
  bool good = false;
  switch (taken) {
    case LearnerAction::kRaise: good = ehs >= config.raise_threshold; break;
    case LearnerAction::kCall: good = ehs >= pot_odds; break;
    case LearnerAction::kFold: good = ehs < pot_odds; break;
  }
  return good ? Judgment::kGood : Judgment::kBad;
}

Judgment judge_wh(LearnerAction taken, Chips net) {
  if (net > 0) return Judgment::kGood;
  return taken == LearnerAction::kFold && net == 0 ? Judgment::kGood : Judgment::kBad;
}

LearnerAgent::LearnerAgent(LearnerConfig config)
    : LearnerAgent(config, QTable(config.delta, config.seed, config.buckets)) {}

LearnerAgent::LearnerAgent(LearnerConfig config, QTable table) : config_(config), table_(std::move(table)) {
  config_.delta = table_.delta();
  config_.seed = table_.seed();
  config_.buckets = table_.buckets();
}

std::string LearnerAgent::name() const {
  return config_.kind == LearnerKind::kWhs ? "learner:whs" : "learner:wh";
}

void LearnerAgent::begin_hand(const PlayerView&) { pending_.clear(); }

LearnerState LearnerAgent::state_of(const PlayerView& view) const {
  if (view.players_dealt != 2) throw InvalidInput("learner agents play heads-up only");
  LearnerState s;
  s.g = class_bucket(canonical_class(view.hole), table_.buckets());
  s.p = view.hero == view.small_blind_seat ? SeatRole::kSmall : SeatRole::kBig;
  s.t = config_.modeling.prior_type;
  for (const auto& seat : view.seats) {
    if (!seat.in_hand || seat.seat == view.hero) continue;
    if (const OpponentProfile* p = book_.find(view.player_at(seat.seat))) s.t = classify(*p, config_.modeling);
  }
  s.a = !view.history.empty() && view.history.back().action == ActionType::kRaise ? LastAction::kRaise
                                                                                   : LastAction::kCall;
  return s;
}

AgentDecision LearnerAgent::decide(const PlayerView& view, Rng& rng) {
  const LearnerState s = state_of(view);
  const ActionWeights w = table_.lookup_or_init(s);
  const LearnerAction chosen = select_action(w, rng.uniform());
  static constexpr ActionType kMap[] = {ActionType::kFold, ActionType::kCall, ActionType::kRaise};
  const ActionType act = legalize(kMap[static_cast<int>(chosen)], view.legal);
  // Judge what was actually played: a free fold is a check, a capped raise a call.
  const LearnerAction taken = act == ActionType::kFold   ? LearnerAction::kFold
                              : act == ActionType::kCall ? LearnerAction::kCall
                                                         : LearnerAction::kRaise;
  if (config_.learning) {
    if (config_.kind == LearnerKind::kWhs) {
      const double ehs = equity_.get(view, rng).ehs;
      table_.update(s, taken, judge_whs(taken, ehs, view.pot_odds(), config_.whs));
    } else {
      pending_.emplace_back(s, taken);
    }
  }
  return {act, "learner:" + std::string(learner_action_name(taken))};
}

void LearnerAgent::observe(const Observation& obs) { book_.observe(obs.player, obs.hand_id, obs.event); }

void LearnerAgent::end_hand(const PlayerView& view, const HandResult& result) {
  if (config_.learning && config_.kind == LearnerKind::kWh) {
    const Chips net = result.net.at(static_cast<std::size_t>(view.hero));
    for (const auto& [s, taken] : pending_) table_.update(s, taken, judge_wh(taken, net));
  }
  pending_.clear();
}

namespace {

// Lets the harness drive an agent it does not own.
class Borrowed : public Agent {
 public:
  explicit Borrowed(Agent& inner) : inner_(inner) {}
  std::string name() const override { return inner_.name(); }
  void begin_hand(const PlayerView& view) override { inner_.begin_hand(view); }
  AgentDecision decide(const PlayerView& view, Rng& rng) override { return inner_.decide(view, rng); }
  void observe(const Observation& obs) override { inner_.observe(obs); }
  void end_hand(const PlayerView& view, const HandResult& result) override { inner_.end_hand(view, result); }
  std::unique_ptr<Agent> clone() const override { return std::make_unique<Borrowed>(inner_); }

 private:
  Agent& inner_;
};

}  // namespace

MatchReport train_learner(LearnerAgent& learner, const std::string& opponent, int hands, std::uint64_t seed) {
  MatchConfig config;
  config.agents = {"@learner", opponent};
  config.hands = hands;
  config.seed = seed;
  config.rotate_seats = true;
  config.bootstrap_resamples = 1;
  return run_match(config, [&](const std::string& name) -> std::unique_ptr<Agent> {
    if (name == "@learner") return std::make_unique<Borrowed>(learner);
    return make_agent(name);
  });
}

}  // namespace holdem
