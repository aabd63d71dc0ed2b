#include "holdem/harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "holdem/registry.hpp"
#include "holdem/text.hpp"

namespace holdem {

namespace {

constexpr std::uint64_t kDeckStream = 1;
constexpr std::uint64_t kAgentStream = 2;
constexpr std::uint64_t kSeriesStream = 3;
constexpr std::uint64_t kBootstrapStream = 4;

bool parse_bool(std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw InvalidInput("expected a boolean, got '" + std::string(text) + "'");
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

// Seat occupants for one hand.
struct Seating {
  std::vector<Agent*> agents;   // by seat
  std::vector<int> players;     // by seat, player id = roster index
  std::vector<Rng*> rngs;       // by seat
};

struct Forced {
  std::vector<long long> by_player;
};

// Plays one hand to completion and returns the finished state.
GameState play_hand(const TableConfig& table, const Seating& seating, std::vector<Chips> stacks,
                    int button, std::uint64_t deck_seed, std::uint64_t hand_id,
                    double timeout_ms, Forced& forced) {
  GameState g = GameState::new_hand(table, std::move(stacks), button, deck_seed, hand_id);
  const int n = table.seats;
  auto view_of = [&](int seat) {
    PlayerView v = g.view(seat);
    v.players = seating.players;
    return v;
  };
  for (int s = 0; s < n; ++s) {
    if (g.in_hand(s)) seating.agents[s]->begin_hand(view_of(s));
  }
  std::vector<bool> forfeited(static_cast<std::size_t>(n), false);
  while (!g.is_complete()) {
    const int seat = g.to_act();
    const LegalActions legal = g.legal_actions();
    ActionType action = ActionType::kCall;
    bool failed = forfeited[seat];
    if (!failed) {
      try {
        const auto start = std::chrono::steady_clock::now();
        AgentDecision d = seating.agents[seat]->decide(view_of(seat), *seating.rngs[seat]);
        const std::chrono::duration<double, std::milli> took = std::chrono::steady_clock::now() - start;
        failed = (timeout_ms > 0 && took.count() > timeout_ms) || !legal.contains(d.action);
        action = d.action;
      } catch (const std::exception&) {
        failed = true;
      }
    }
    if (failed) {
      forfeited[seat] = true;
      ++forced.by_player[seating.players[seat]];
      action = legalize(ActionType::kFold, legal);
    }
    Observation obs;
    obs.hand_id = hand_id;
    obs.player = seating.players[seat];
    obs.board = g.board();
    obs.event = g.apply(action);
    for (int s = 0; s < n; ++s) {
      if (g.in_hand(s)) seating.agents[s]->observe(obs);
    }
  }
  for (int s = 0; s < n; ++s) {
    if (g.in_hand(s)) seating.agents[s]->end_hand(view_of(s), g.result());
  }
  return g;
}

struct MatchState {
  const MatchConfig& config;
  TableConfig table;
  std::vector<std::unique_ptr<Agent>>& agents;
  std::vector<Rng> rngs;
  MatchReport report;
  Forced forced;
  std::uint64_t next_hand_id = 0;

  MatchState(const MatchConfig& c, std::vector<std::unique_ptr<Agent>>& a)
      : config(c), table(c.table), agents(a) {
    const int n = static_cast<int>(a.size());
    table.seats = n;
    for (int i = 0; i < n; ++i) rngs.emplace_back(derive_seed(c.seed, {kAgentStream, static_cast<std::uint64_t>(i)}));
    forced.by_player.assign(a.size(), 0);
    report.mode = c.mode;
    report.agents.resize(a.size());
    for (int i = 0; i < n; ++i) report.agents[i].name = a[i]->name();
    if (c.keep_log) {
      report.log.table = table;
      report.log.seed = c.seed;
      for (const auto& r : report.agents) report.log.players.push_back(r.name);
    }
  }

  // Seat s holds roster entry (s + offset) % n.
  Seating seat_roster(int offset) {
    const int n = table.seats;
    Seating st;
    for (int s = 0; s < n; ++s) {
      const int p = (s + offset) % n;
      st.agents.push_back(agents[p].get());
      st.players.push_back(p);
      st.rngs.push_back(&rngs[p]);
    }
    return st;
  }

  // Plays a hand with per-player stacks; returns net per player.
  std::vector<Chips> hand(int offset, const std::vector<Chips>& player_stacks, int button,
                          std::uint64_t deck_seed) {
    const int n = table.seats;
    Seating st = seat_roster(offset);
    std::vector<Chips> stacks(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) stacks[s] = player_stacks[st.players[s]];
    const std::uint64_t id = next_hand_id++;
    GameState g = play_hand(table, st, stacks, button, deck_seed, id, config.decision_timeout_ms, forced);
    std::vector<Chips> net(static_cast<std::size_t>(n), 0);
    for (int s = 0; s < n; ++s) {
      net[st.players[s]] = g.result().net[s];
      if (g.in_hand(s)) ++report.agents[st.players[s]].hands;
    }
    if (config.keep_log) report.log.hands.push_back(make_record(g, st.players, deck_seed));
    ++report.hands_played;
    return net;
  }

  void tally(const std::vector<Chips>& net) {
    for (std::size_t p = 0; p < net.size(); ++p) report.agents[p].net += net[p];
    if (report.hands_played % report.bankroll_every == 0) {
      for (auto& a : report.agents) a.bankroll.push_back(a.net);
    }
  }

  void finish() {
    for (std::size_t p = 0; p < report.agents.size(); ++p) {
      auto& a = report.agents[p];
      a.forced_decisions = forced.by_player[p];
      a.income_rate = a.hands == 0 ? 0.0
                                   : static_cast<double>(a.net) / static_cast<double>(a.hands) /
                                         static_cast<double>(table.small_bet);
    }
  }
};

std::uint64_t deck_seed(std::uint64_t master, std::uint64_t deal) {
  return derive_seed(master, {kDeckStream, deal});
}

// A rotating roster keeps the button on seat 0 so every player takes every
// position; a fixed roster moves the button instead.
int button_for(const MatchConfig& config, int hand, int seats) { return config.rotate_seats ? 0 : hand % seats; }

void play_cash(MatchState& m) {
  const int n = m.table.seats;
  const std::vector<Chips> stacks(static_cast<std::size_t>(n), m.config.starting_stack);
  if (m.config.duplicate) {
    const int deals = std::max(1, m.config.hands / n);
    for (int d = 0; d < deals; ++d) {
      std::vector<double> block(static_cast<std::size_t>(n), 0.0);
      for (int r = 0; r < n; ++r) {
        auto net = m.hand(r, stacks, d % n, deck_seed(m.config.seed, static_cast<std::uint64_t>(d)));
        m.tally(net);
        for (int p = 0; p < n; ++p) block[p] += static_cast<double>(net[p]) / static_cast<double>(m.table.small_bet);
      }
      m.report.blocks.push_back(std::move(block));
    }
    for (int p = 0; p < n; ++p) {
      std::vector<double> per_hand;
      per_hand.reserve(m.report.blocks.size());
      for (const auto& b : m.report.blocks) per_hand.push_back(b[p] / n);
      m.report.income_ci.push_back(bootstrap_mean_ci(
          per_hand, m.config.bootstrap_resamples, 0.95,
          derive_seed(m.config.seed, {kBootstrapStream, static_cast<std::uint64_t>(p)})));
    }
    return;
  }
  for (int h = 0; h < m.config.hands; ++h) {
    const int offset = m.config.rotate_seats ? h % n : 0;
    m.tally(m.hand(offset, stacks, button_for(m.config, h, n), deck_seed(m.config.seed, static_cast<std::uint64_t>(h))));
  }
}

void play_ring(MatchState& m) {
  const int n = m.table.seats;
  std::vector<Chips> stacks(static_cast<std::size_t>(n), m.config.starting_stack);
  for (int h = 0; h < m.config.hands; ++h) {
    for (int p = 0; p < n; ++p) {
      if (stacks[p] == 0) {
        stacks[p] = m.config.starting_stack;
        ++m.report.agents[p].rebuys;
      }
    }
    const int offset = m.config.rotate_seats ? h % n : 0;
    auto net = m.hand(offset, stacks, button_for(m.config, h, n), deck_seed(m.config.seed, static_cast<std::uint64_t>(h)));
    for (int p = 0; p < n; ++p) stacks[p] += net[p];
    m.tally(net);
  }
}

void play_tournament(MatchState& m) {
  const int n = m.table.seats;
  std::vector<Chips> stacks(static_cast<std::size_t>(n), m.config.starting_stack);
  int h = 0;
  for (; h < m.config.hands; ++h) {
    const int alive = static_cast<int>(std::count_if(stacks.begin(), stacks.end(), [](Chips c) { return c > 0; }));
    if (alive < 2) break;
    const int offset = m.config.rotate_seats ? h % n : 0;
    auto net = m.hand(offset, stacks, button_for(m.config, h, n), deck_seed(m.config.seed, static_cast<std::uint64_t>(h)));
    for (int p = 0; p < n; ++p) {
      const bool was_alive = stacks[p] > 0;
      stacks[p] += net[p];
      if (was_alive && stacks[p] == 0) {
        m.report.agents[p].busted = true;
        m.report.agents[p].survival = h + 1;
      }
    }
    m.tally(net);
  }
  for (auto& a : m.report.agents) {
    if (!a.busted) a.survival = h;
  }
}

MatchReport run_with_agents(const MatchConfig& config, std::vector<std::unique_ptr<Agent>>& agents) {
  config.validate();
  MatchState m(config, agents);
  switch (config.mode) {
    case MatchMode::kCash: play_cash(m); break;
    case MatchMode::kRing: play_ring(m); break;
    case MatchMode::kTournament:
    case MatchMode::kEliminationSeries: play_tournament(m); break;
  }
  m.finish();
  return std::move(m.report);
}

std::vector<std::unique_ptr<Agent>> build(const MatchConfig& config, const AgentFactory& factory) {
  std::vector<std::unique_ptr<Agent>> agents;
  for (const auto& name : config.agents) agents.push_back(factory(name));
  return agents;
}

}  // namespace

std::string_view mode_name(MatchMode mode) {
  switch (mode) {
    case MatchMode::kCash: return "cash";
    case MatchMode::kRing: return "ring";
    case MatchMode::kTournament: return "tournament";
    case MatchMode::kEliminationSeries: return "elimination-series";
  }
  return "?";
}

MatchMode parse_mode(std::string_view text) {
  for (auto m : {MatchMode::kCash, MatchMode::kRing, MatchMode::kTournament, MatchMode::kEliminationSeries}) {
    if (mode_name(m) == text) return m;
  }
  throw InvalidInput("unknown mode '" + std::string(text) + "' (cash, ring, tournament, elimination-series)");
}

void MatchConfig::validate() const {
  if (agents.size() < 2 || agents.size() > 10) throw InvalidInput("roster must hold 2..10 agents");
  if (hands < 0) throw InvalidInput("hands must be non-negative");
  if (tournaments < 0) throw InvalidInput("tournaments must be non-negative");
  if (starting_stack <= 0) throw InvalidInput("starting stack must be positive");
  if (duplicate && mode != MatchMode::kCash) throw InvalidInput("duplicate deals need cash mode");
  if (decision_timeout_ms < 0) throw InvalidInput("decision timeout must be non-negative");
  if (bootstrap_resamples < 1) throw InvalidInput("bootstrap resamples must be positive");
  TableConfig t = table;
  t.seats = static_cast<int>(agents.size());
  t.validate();
}

MatchConfig MatchConfig::parse(std::string_view text) {
  MatchConfig c;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidInput("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(body.substr(0, eq)));
    const std::string_view value = trim(body.substr(eq + 1));
    try {
      if (key == "agents") {
        c.agents.clear();
        for (auto part : split(value, ',')) {
          auto name = trim(part);
          if (!name.empty()) c.agents.emplace_back(name);
        }
      } else if (key == "mode") {
        c.mode = parse_mode(value);
      } else if (key == "hands") {
        c.hands = static_cast<int>(parse_int(value));
      } else if (key == "tournaments") {
        c.tournaments = static_cast<int>(parse_int(value));
      } else if (key == "seed") {
        c.seed = static_cast<std::uint64_t>(parse_int(value));
      } else if (key == "starting_stack") {
        c.starting_stack = parse_int(value);
      } else if (key == "small_bet") {
        c.table.small_bet = parse_int(value);
      } else if (key == "big_bet") {
        c.table.big_bet = parse_int(value);
      } else if (key == "small_blind") {
        c.table.small_blind = parse_int(value);
      } else if (key == "big_blind") {
        c.table.big_blind = parse_int(value);
      } else if (key == "max_raises") {
        c.table.max_raises_per_round = static_cast<int>(parse_int(value));
      } else if (key == "uncapped_heads_up") {
        c.table.uncapped_heads_up = parse_bool(value);
      } else if (key == "rotate_seats") {
        c.rotate_seats = parse_bool(value);
      } else if (key == "duplicate") {
        c.duplicate = parse_bool(value);
      } else if (key == "decision_timeout_ms") {
        c.decision_timeout_ms = parse_double(value);
      } else if (key == "keep_log") {
        c.keep_log = parse_bool(value);
      } else if (key == "bootstrap_resamples") {
        c.bootstrap_resamples = static_cast<int>(parse_int(value));
      } else {
        throw InvalidInput("unknown key '" + key + "'");
      }
    } catch (const InvalidInput& e) {
      const std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      throw InvalidInput("line " + std::to_string(line_no) + ": " + msg);
    }
  }
  c.table.seats = static_cast<int>(std::max<std::size_t>(2, c.agents.size()));
  c.validate();
  return c;
}

MatchConfig MatchConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open match config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string MatchConfig::to_text() const {
  auto b = [](bool v) { return v ? "true" : "false"; };
  std::ostringstream o;
  o << "agents = " << join(agents, ", ") << '\n'
    << "mode = " << mode_name(mode) << '\n'
    << "hands = " << hands << '\n'
    << "tournaments = " << tournaments << '\n'
    << "seed = " << seed << '\n'
    << "starting_stack = " << starting_stack << '\n'
    << "small_bet = " << table.small_bet << '\n'
    << "big_bet = " << table.big_bet << '\n'
    << "small_blind = " << table.small_blind << '\n'
    << "big_blind = " << table.big_blind << '\n'
    << "max_raises = " << table.max_raises_per_round << '\n'
    << "uncapped_heads_up = " << b(table.uncapped_heads_up) << '\n'
    << "rotate_seats = " << b(rotate_seats) << '\n'
    << "duplicate = " << b(duplicate) << '\n'
    << "decision_timeout_ms = " << format_double(decision_timeout_ms) << '\n'
    << "keep_log = " << b(keep_log) << '\n'
    << "bootstrap_resamples = " << bootstrap_resamples << '\n';
  return o.str();
}

std::string MatchReport::to_csv() const {
  std::string out = "agent,hands,net,income_rate,survival,busted,rebuys,forced,ci_lo,ci_hi\n";
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& a = agents[i];
    out += a.name + ',' + std::to_string(a.hands) + ',' + std::to_string(a.net) + ',' +
           format_double(a.income_rate) + ',' + std::to_string(a.survival) + ',' +
           (a.busted ? "1" : "0") + ',' + std::to_string(a.rebuys) + ',' +
           std::to_string(a.forced_decisions) + ',';
    if (i < income_ci.size()) {
      out += format_double(income_ci[i].lo) + ',' + format_double(income_ci[i].hi);
    } else {
      out += ',';
    }
    out += '\n';
  }
  return out;
}

std::string SeriesReport::to_csv() const {
  std::string out = "kind,entries,survivals,share\n";
  for (const auto& k : kinds) {
    out += k.kind + ',' + std::to_string(k.entries) + ',' + std::to_string(k.survivals) + ',' +
           format_double(k.share()) + '\n';
  }
  return out;
}

MatchReport run_match(const MatchConfig& config, const AgentFactory& factory) {
  config.validate();
  if (config.mode == MatchMode::kEliminationSeries) {
    throw InvalidInput("use run_elimination_series for elimination-series mode");
  }
  auto agents = build(config, factory);
  return run_with_agents(config, agents);
}

MatchReport run_match(const MatchConfig& config) { return run_match(config, make_agent); }

std::vector<MatchReport> run_matches(const std::vector<MatchConfig>& configs) {
  std::vector<MatchReport> out(configs.size());
  std::vector<std::string> errors(configs.size());
  const auto n = static_cast<long>(configs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = run_match(configs[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) throw InvalidInput("match " + std::to_string(i) + ": " + errors[i]);
  }
  return out;
}

SeriesReport run_elimination_series(const MatchConfig& config, const AgentFactory& factory) {
  config.validate();
  SeriesReport report;
  report.tournaments = config.tournaments;
  auto agents = build(config, factory);
  auto entry = [&](const std::string& kind) -> SeriesEntry& {
    for (auto& k : report.kinds) {
      if (k.kind == kind) return k;
    }
    report.kinds.push_back({kind, 0, 0});
    return report.kinds.back();
  };
  for (const auto& a : agents) entry(a->name());
  for (int t = 0; t < config.tournaments; ++t) {
    MatchConfig c = config;
    c.mode = MatchMode::kTournament;
    c.seed = derive_seed(config.seed, {kSeriesStream, static_cast<std::uint64_t>(t)});
    c.keep_log = false;
    MatchReport r = run_with_agents(c, agents);
    std::vector<std::size_t> survivors;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      auto& k = entry(agents[i]->name());
      ++k.entries;
      if (!r.agents[i].busted) {
        ++k.survivals;
        survivors.push_back(i);
      }
    }
    Rng rng(derive_seed(config.seed, {kSeriesStream, static_cast<std::uint64_t>(t), 1}));
    for (std::size_t i = 0; i < agents.size(); ++i) {
      if (!r.agents[i].busted || survivors.empty()) continue;
      agents[i] = agents[survivors[rng.below(survivors.size())]]->clone();
    }
  }
  return report;
}

SeriesReport run_elimination_series(const MatchConfig& config) {
  return run_elimination_series(config, make_agent);
}

ConfidenceInterval bootstrap_mean_ci(std::span<const double> samples, int resamples, double level,
                                     std::uint64_t seed) {
  ConfidenceInterval ci;
  if (samples.empty()) return ci;
  const double n = static_cast<double>(samples.size());
  double sum = 0;
  for (double s : samples) sum += s;
  ci.mean = sum / n;
  Rng rng(seed);
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (auto& m : means) {
    double total = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) total += samples[rng.below(samples.size())];
    m = total / n;
  }
  std::sort(means.begin(), means.end());
  const double tail = (1.0 - level) / 2;
  auto at = [&](double q) {
    auto idx = static_cast<std::size_t>(q * static_cast<double>(means.size() - 1) + 0.5);
    return means[std::min(idx, means.size() - 1)];
  };
  ci.lo = at(tail);
  ci.hi = at(1.0 - tail);
  return ci;
}

bool check_switch(const SwitchPolicy& policy, std::span<const double> per_hand_sb) {
  if (policy.window < 1) throw InvalidInput("switch window must be at least 1");
  if (per_hand_sb.size() < static_cast<std::size_t>(policy.window)) return false;
  double net = 0;
  for (std::size_t i = per_hand_sb.size() - policy.window; i < per_hand_sb.size(); ++i) net += per_hand_sb[i];
  return net <= -policy.threshold;
}

SwitchingAgent::SwitchingAgent(std::vector<std::unique_ptr<Agent>> strategies, SwitchPolicy policy)
    : strategies_(std::move(strategies)), policy_(policy) {
  if (strategies_.empty()) throw InvalidInput("switching agent needs at least one strategy");
  if (policy.window < 1) throw InvalidInput("switch window must be at least 1");
}

SwitchingAgent::SwitchingAgent(const SwitchingAgent& other)
    : policy_(other.policy_), active_(other.active_), switches_(other.switches_), window_(other.window_) {
  for (const auto& s : other.strategies_) strategies_.push_back(s->clone());
}

std::string SwitchingAgent::name() const {
  std::vector<std::string> names;
  for (const auto& s : strategies_) names.push_back(s->name());
  return "switch:" + join(names, "|");
}

void SwitchingAgent::begin_hand(const PlayerView& view) {
  for (auto& s : strategies_) s->begin_hand(view);
}

AgentDecision SwitchingAgent::decide(const PlayerView& view, Rng& rng) {
  return strategies_[active_]->decide(view, rng);
}

void SwitchingAgent::observe(const Observation& obs) {
  for (auto& s : strategies_) s->observe(obs);
}

void SwitchingAgent::end_hand(const PlayerView& view, const HandResult& result) {
  for (auto& s : strategies_) s->end_hand(view, result);
  window_.push_back(static_cast<double>(result.net[view.hero]) / static_cast<double>(view.config.small_bet));
  if (check_switch(policy_, window_)) {
    active_ = (active_ + 1) % strategies_.size();
    ++switches_;
    window_.clear();
  }
}

}  // namespace holdem
