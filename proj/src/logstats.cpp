#include "holdem/logstats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "holdem/agents.hpp"
#include "holdem/equity.hpp"
#include "holdem/text.hpp"
#include "xml.hpp"

namespace holdem {

LogError::LogError(int line, int column, const std::string& message)
    : InvalidInput(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

HandRecord make_record(const GameState& finished, std::span<const int> players,
                       std::optional<std::uint64_t> seed) {
  const HandResult& r = finished.result();
  HandRecord h;
  h.hand_id = finished.hand_id();
  h.seed = seed;
  h.button = finished.button();
  h.players.assign(players.begin(), players.end());
  h.stacks = finished.starting_stacks();
  for (int s = 0; s < finished.config().seats; ++s) h.holes.push_back(finished.hole(s));
  h.board = r.board;
  h.events = r.events;
  h.net = r.net;
  return h;
}

// ---------------------------------------------------------------------------
// Writing

namespace {

const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string write_log(const GameLog& log) {
  std::ostringstream o;
  const TableConfig& t = log.table;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<gamelog version=\"1\">\n";
  o << "  <table seats=\"" << t.seats << "\" small_bet=\"" << t.small_bet << "\" big_bet=\""
    << t.big_bet << "\" small_blind=\"" << t.small_blind << "\" big_blind=\"" << t.big_blind
    << "\" max_raises=\"" << t.max_raises_per_round << "\" uncapped_heads_up=\""
    << flag(t.uncapped_heads_up) << "\"/>\n";
  o << "  <meta";
  if (log.seed) o << " seed=\"" << *log.seed << "\"";
  o << " timestamp=\"" << xml::escape(log.timestamp) << "\"/>\n";
  o << "  <players>\n";
  for (std::size_t i = 0; i < log.players.size(); ++i) {
    o << "    <player id=\"" << i << "\" name=\"" << xml::escape(log.players[i]) << "\"/>\n";
  }
  o << "  </players>\n";
  for (const auto& h : log.hands) {
    o << "  <hand id=\"" << h.hand_id << "\" button=\"" << h.button << "\"";
    if (h.seed) o << " seed=\"" << *h.seed << "\"";
    o << ">\n";
    for (std::size_t s = 0; s < h.stacks.size(); ++s) {
      o << "    <seat index=\"" << s << "\" player=\"" << h.players[s] << "\" stack=\"" << h.stacks[s] << "\"";
      if (s < h.holes.size() && h.holes[s]) o << " hole=\"" << h.holes[s]->str() << "\"";
      o << "/>\n";
    }
    for (const auto& e : h.events) {
      o << "    <action seat=\"" << e.seat << "\" street=\"" << street_name(e.street) << "\" type=\""
        << action_name(e.action) << "\" amount=\"" << e.amount << "\" to_call=\"" << e.to_call
        << "\" facing_raise=\"" << flag(e.facing_raise) << "\" first=\"" << flag(e.first_decision)
        << "\"/>\n";
    }
    o << "    <board cards=\"" << cards_str(h.board) << "\"/>\n";
    for (std::size_t s = 0; s < h.net.size(); ++s) {
      o << "    <result seat=\"" << s << "\" net=\"" << h.net[s] << "\"/>\n";
    }
    o << "  </hand>\n";
  }
  o << "</gamelog>\n";
  return o.str();
}

void write_log_file(const GameLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << write_log(log);
}

// ---------------------------------------------------------------------------
// Reading

namespace {

[[noreturn]] void fail_at(const xml::Node& n, const std::string& message) {
  throw LogError(n.line, n.column, "<" + n.name + ">: " + message);
}

const std::string& required(const xml::Node& n, std::string_view key) {
  const std::string* v = n.attribute(key);
  if (!v) fail_at(n, "missing attribute '" + std::string(key) + "'");
  return *v;
}

void only_attributes(const xml::Node& n, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : n.attributes) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      fail_at(n, "unexpected attribute '" + k + "'");
    }
  }
}

template <typename F>
auto convert(const xml::Node& n, std::string_view key, F f) {
  try {
    return f(required(n, key));
  } catch (const LogError&) {
    throw;
  } catch (const std::exception& e) {
    fail_at(n, "attribute '" + std::string(key) + "': " + e.what());
  }
}

long long int_attr(const xml::Node& n, std::string_view key) {
  return convert(n, key, [](const std::string& v) { return parse_int(v); });
}

std::uint64_t u64_attr(const xml::Node& n, std::string_view key) {
  return convert(n, key, [](const std::string& v) {
    std::size_t used = 0;
    if (v.empty() || v[0] == '-') throw InvalidInput("expected an unsigned integer");
    unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) throw InvalidInput("expected an unsigned integer");
    return static_cast<std::uint64_t>(x);
  });
}

bool bool_attr(const xml::Node& n, std::string_view key) {
  return convert(n, key, [](const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw InvalidInput("expected true or false");
  });
}

HandRecord read_hand(const xml::Node& node, const TableConfig& table, std::size_t players) {
  only_attributes(node, {"id", "button", "seed"});
  HandRecord h;
  h.hand_id = u64_attr(node, "id");
  h.button = static_cast<int>(int_attr(node, "button"));
  if (node.attribute("seed")) h.seed = u64_attr(node, "seed");
  const auto n = static_cast<std::size_t>(table.seats);
  h.players.assign(n, -1);
  h.stacks.assign(n, 0);
  h.holes.assign(n, std::nullopt);
  h.net.assign(n, 0);
  std::vector<bool> seen_seat(n, false), seen_result(n, false);
  bool seen_board = false;
  auto seat_index = [&](const xml::Node& c, std::string_view key) {
    const long long s = int_attr(c, key);
    if (s < 0 || static_cast<std::size_t>(s) >= n) fail_at(c, "seat index out of range");
    return static_cast<std::size_t>(s);
  };
  for (const auto& c : node.children) {
    if (c.name == "seat") {
      only_attributes(c, {"index", "player", "stack", "hole"});
      const auto s = seat_index(c, "index");
      if (seen_seat[s]) fail_at(c, "seat listed twice");
      seen_seat[s] = true;
      const long long p = int_attr(c, "player");
      if (p < -1 || p >= static_cast<long long>(players)) fail_at(c, "unknown player id");
      h.players[s] = static_cast<int>(p);
      h.stacks[s] = int_attr(c, "stack");
      if (c.attribute("hole")) {
        h.holes[s] = convert(c, "hole", [](const std::string& v) { return HoleCards::parse(v); });
      }
    } else if (c.name == "action") {
      only_attributes(c, {"seat", "street", "type", "amount", "to_call", "facing_raise", "first"});
      ActionEvent e;
      e.seat = static_cast<int>(seat_index(c, "seat"));
      e.street = convert(c, "street", [](const std::string& v) { return parse_street(v); });
      e.action = convert(c, "type", [](const std::string& v) { return parse_action(v); });
      e.amount = int_attr(c, "amount");
      e.to_call = int_attr(c, "to_call");
      e.facing_raise = bool_attr(c, "facing_raise");
      e.first_decision = bool_attr(c, "first");
      h.events.push_back(e);
    } else if (c.name == "board") {
      only_attributes(c, {"cards"});
      if (seen_board) fail_at(c, "board listed twice");
      seen_board = true;
      h.board = convert(c, "cards", [](const std::string& v) { return parse_cards(v); });
    } else if (c.name == "result") {
      only_attributes(c, {"seat", "net"});
      const auto s = seat_index(c, "seat");
      if (seen_result[s]) fail_at(c, "result listed twice");
      seen_result[s] = true;
      h.net[s] = int_attr(c, "net");
    } else {
      fail_at(c, "unexpected element inside <hand>");
    }
    if (!c.children.empty()) fail_at(c, "element must be empty");
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (!seen_seat[s]) fail_at(node, "missing <seat index=\"" + std::to_string(s) + "\">");
    if (!seen_result[s]) fail_at(node, "missing <result seat=\"" + std::to_string(s) + "\">");
  }
  if (!seen_board) fail_at(node, "missing <board>");
  return h;
}

}  // namespace

namespace {

// A replay failure at one recorded action.
struct ActionMismatch : InvalidInput {
  ActionMismatch(std::size_t i, const std::string& message)
      : InvalidInput("action " + std::to_string(i + 1) + ": " + message), index(i) {}
  std::size_t index;
};

void replay_record(const TableConfig& table, const HandRecord& hand) {
  Chips sum = 0;
  for (Chips c : hand.net) sum += c;
  if (sum != 0) throw InvalidInput("chip conservation violated: net results sum to " + std::to_string(sum));
  if (hand.stacks.size() != static_cast<std::size_t>(table.seats)) {
    throw InvalidInput("hand does not list every seat");
  }
  GameState g = GameState::new_hand_with_cards(table, hand.stacks, hand.button, hand.holes,
                                               hand.board, hand.hand_id);
  for (std::size_t i = 0; i < hand.events.size(); ++i) {
    const ActionEvent& want = hand.events[i];
    if (g.is_complete()) throw ActionMismatch(i, "the hand had already ended");
    if (g.to_act() != want.seat) {
      throw ActionMismatch(i, "seat " + std::to_string(want.seat) + " acted out of turn, seat " +
                                  std::to_string(g.to_act()) + " was to act");
    }
    ActionEvent got;
    try {
      got = g.apply(want.action);
    } catch (const IllegalAction& e) {
      throw ActionMismatch(i, e.what());
    }
    if (!(got == want)) throw ActionMismatch(i, "recorded fields do not match the replay");
  }
  if (!g.is_complete()) throw InvalidInput("hand ends before it is complete");
  // Settlement can only be checked when every live hand is known.
  for (int s = 0; s < table.seats; ++s) {
    const bool known = static_cast<std::size_t>(s) < hand.holes.size() && hand.holes[s];
    if (g.in_hand(s) && !g.folded(s) && !known && g.result().went_to_showdown) return;
  }
  if (g.result().net != hand.net) throw InvalidInput("recorded results do not match settlement");
  if (g.result().board != hand.board) throw InvalidInput("recorded board does not match the hand");
}

}  // namespace

void validate_hand(const TableConfig& table, const HandRecord& hand) { replay_record(table, hand); }

GameLog read_log(std::string_view text) {
  const xml::Node root = xml::parse(text);
  if (root.name != "gamelog") fail_at(root, "root element must be <gamelog>");
  only_attributes(root, {"version"});
  if (required(root, "version") != "1") fail_at(root, "unsupported version");
  GameLog log;
  bool have_table = false, have_players = false;
  for (const auto& c : root.children) {
    if (c.name == "table") {
      only_attributes(c, {"seats", "small_bet", "big_bet", "small_blind", "big_blind", "max_raises",
                          "uncapped_heads_up"});
      TableConfig& t = log.table;
      t.seats = static_cast<int>(int_attr(c, "seats"));
      t.small_bet = int_attr(c, "small_bet");
      t.big_bet = int_attr(c, "big_bet");
      t.small_blind = int_attr(c, "small_blind");
      t.big_blind = int_attr(c, "big_blind");
      t.max_raises_per_round = static_cast<int>(int_attr(c, "max_raises"));
      t.uncapped_heads_up = bool_attr(c, "uncapped_heads_up");
      try {
        t.validate();
      } catch (const InvalidInput& e) {
        fail_at(c, e.what());
      }
      have_table = true;
    } else if (c.name == "meta") {
      only_attributes(c, {"seed", "timestamp"});
      if (c.attribute("seed")) log.seed = u64_attr(c, "seed");
      if (const auto* ts = c.attribute("timestamp")) log.timestamp = *ts;
    } else if (c.name == "players") {
      for (const auto& p : c.children) {
        if (p.name != "player") fail_at(p, "expected <player>");
        only_attributes(p, {"id", "name"});
        if (int_attr(p, "id") != static_cast<long long>(log.players.size())) {
          fail_at(p, "player ids must count up from 0");
        }
        log.players.push_back(required(p, "name"));
      }
      have_players = true;
    } else if (c.name == "hand") {
      if (!have_table || !have_players) fail_at(c, "<table> and <players> must precede hands");
      HandRecord h = read_hand(c, log.table, log.players.size());
      try {
        replay_record(log.table, h);
      } catch (const ActionMismatch& e) {
        std::size_t seen = 0;
        for (const auto& child : c.children) {
          if (child.name == "action" && seen++ == e.index) fail_at(child, e.what());
        }
        fail_at(c, e.what());
      } catch (const InvalidInput& e) {
        fail_at(c, e.what());
      }
      log.hands.push_back(std::move(h));
    } else {
      fail_at(c, "unexpected element");
    }
  }
  if (!have_table) fail_at(root, "missing <table>");
  if (!have_players) fail_at(root, "missing <players>");
  return log;
}

GameLog read_log_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return read_log(ss.str());
}

// ---------------------------------------------------------------------------
// Converters

namespace {

class XmlConverter : public LogConverter {
 public:
  std::string format() const override { return "xml"; }
  GameLog convert(std::string_view input) const override { return read_log(input); }
};

}  // namespace

ConverterRegistry::ConverterRegistry() { add(std::make_unique<XmlConverter>()); }

void ConverterRegistry::add(std::unique_ptr<LogConverter> converter) {
  std::string key = converter->format();
  converters_[key] = std::move(converter);
}

const LogConverter& ConverterRegistry::get(std::string_view format) const {
  auto it = converters_.find(format);
  if (it == converters_.end()) throw InvalidInput("no converter for format '" + std::string(format) + "'");
  return *it->second;
}

std::vector<std::string> ConverterRegistry::formats() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : converters_) out.push_back(k);
  return out;
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

std::size_t board_cards_at(Street street) {
  switch (street) {
    case Street::kPreflop: return 0;
    case Street::kFlop: return 3;
    case Street::kTurn: return 4;
    default: return 5;
  }
}

// Clockwise distance from the first funded seat left of the button.
int position_of(const HandRecord& h, int seat) {
  const int n = static_cast<int>(h.stacks.size());
  int index = 0;
  for (int k = 1; k <= n; ++k) {
    const int s = (h.button + k) % n;
    if (h.stacks[s] <= 0) continue;
    if (s == seat) return index;
    ++index;
  }
  return index;
}

int funded(const HandRecord& h) {
  return static_cast<int>(std::count_if(h.stacks.begin(), h.stacks.end(), [](Chips c) { return c > 0; }));
}

}  // namespace

Extraction extract(const GameLog& log, const ExtractOptions& options) {
  Extraction out;
  std::set<std::string> seen;
  for (const auto& name : log.players) {
    if (seen.insert(name).second) out.players.push_back(name);
  }
  ProfileBook book;
  const EquityConfig equity = EquityConfig::play();
  for (const auto& h : log.hands) {
    const int n = static_cast<int>(h.stacks.size());
    const int dealt = funded(h);
    std::vector<int> dealt_players;
    for (int s = 0; s < n; ++s) {
      if (h.stacks[s] > 0 && h.players[s] >= 0) dealt_players.push_back(h.players[s]);
    }
    book.begin_hand(h.hand_id, dealt_players);
    int active = dealt;
    std::optional<int> last_player;
    for (std::size_t i = 0; i < h.events.size(); ++i) {
      const ActionEvent& e = h.events[i];
      GameStatsRow row;
      row.hand_id = h.hand_id;
      row.seat = e.seat;
      row.street = e.street;
      row.position_score = dealt > 1 ? static_cast<double>(position_of(h, e.seat)) / (dealt - 1) : 0.0;
      row.facing_raise = e.facing_raise;
      row.action = e.action;
      if (options.compute_ehs && h.holes[e.seat]) {
        const std::size_t shown = std::min(board_cards_at(e.street), h.board.size());
        std::vector<Card> board(h.board.begin(), h.board.begin() + static_cast<long>(shown));
        Rng rng(derive_seed(options.seed, {h.hand_id, i}));
        row.ehs = effective_hand_strength(*h.holes[e.seat], board, WeightTable::uniform(),
                                          std::max(1, active - 1), equity, rng)
                      .ehs;
      }
      if (last_player) {
        const OpponentProfile* p = book.find(*last_player);
        row.last_type = p ? classify(*p, options.modeling) : options.modeling.prior_type;
      }
      out.rows.push_back(row);
      const int player = h.players[e.seat];
      book.observe(player, h.hand_id, e);
      last_player = player;
      if (e.action == ActionType::kFold) --active;
    }
  }
  return out;
}

std::string rows_to_csv(const std::vector<GameStatsRow>& rows) {
  std::string out = "hand,seat,street,position_score,ehs,last_type,facing_raise,action\n";
  for (const auto& r : rows) {
    out += std::to_string(r.hand_id) + ',' + std::to_string(r.seat) + ',' +
           std::string(street_name(r.street)) + ',' + format_double(r.position_score) + ',' +
           (r.ehs ? format_double(*r.ehs) : std::string()) + ',' +
           (r.last_type ? std::string(type_name(*r.last_type)) : std::string()) + ',' +
           (r.facing_raise ? "1" : "0") + ',' + std::string(action_name(r.action)) + '\n';
  }
  return out;
}

std::string player_list_csv(const Extraction& extraction) {
  std::string out = "player\n";
  for (const auto& p : extraction.players) out += p + '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Factor analysis

std::optional<double> Ratio::value() const {
  if (total == 0) return std::nullopt;
  return static_cast<double>(count) / static_cast<double>(total);
}

std::pair<double, double> Ratio::wald(double z) const {
  if (total == 0) return {0.0, 1.0};
  const double p = *value();
  const double half = z * std::sqrt(p * (1 - p) / static_cast<double>(total));
  return {std::max(0.0, p - half), std::min(1.0, p + half)};
}

RatioDifference compare_ratios(const Ratio& a, const Ratio& b, double z) {
  RatioDifference d;
  if (a.total == 0 || b.total == 0) return {0.0, -1.0, 1.0};
  const double pa = *a.value(), pb = *b.value();
  const double se = std::sqrt(pa * (1 - pa) / static_cast<double>(a.total) +
                              pb * (1 - pb) / static_cast<double>(b.total));
  d.estimate = pa - pb;
  d.lo = d.estimate - z * se;
  d.hi = d.estimate + z * se;
  return d;
}

FactorReport factor_analysis(std::span<const GameLog> logs) {
  FactorReport r;
  r.by_position = {{"early"}, {"middle"}, {"late"}};
  for (int n = 2; n <= 10; ++n) r.by_players.push_back({std::to_string(n) + "-players"});
  r.by_first_raise = {{"first-not-raised"}, {"first-raised"}};
  r.by_facing_raise = {{"unraised"}, {"facing-raise"}};
  static constexpr std::array<std::string_view, 4> kBuckets = {"<10bb", "10-25bb", "25-50bb", ">=50bb"};
  static constexpr std::array<std::string_view, 3> kActions = {"fold", "call", "raise"};
  for (auto b : kBuckets)
    for (auto a : kActions) r.by_stack.push_back({std::string(b) + ":" + std::string(a)});

  for (const auto& log : logs) {
    for (const auto& h : log.hands) {
      const int dealt = funded(h);
      int first_seat = -1;
      bool first_raised = false;
      for (const auto& e : h.events) {
        if (e.street != Street::kPreflop || !e.first_decision) continue;
        const bool opener = first_seat < 0;
        if (opener) {
          first_seat = e.seat;
          first_raised = e.action == ActionType::kRaise;
        }
        const Chips stack_bb = h.stacks[e.seat] / log.table.big_bet;
        const int bucket = stack_bb < 10 ? 0 : (stack_bb < 25 ? 1 : (stack_bb < 50 ? 2 : 3));
        for (int a = 0; a < 3; ++a) {
          auto& ratio = r.by_stack[static_cast<std::size_t>(bucket * 3 + a)];
          ++ratio.total;
          ratio.count += static_cast<int>(e.action) == a;
        }
        if (e.to_call <= 0) continue;  // folding was not an option
        const bool folded = e.action == ActionType::kFold;
        auto add = [&](Ratio& ratio) {
          ++ratio.total;
          ratio.count += folded;
        };
        if (dealt >= 2 && dealt <= 10) add(r.by_players[static_cast<std::size_t>(dealt - 2)]);
        add(r.by_facing_raise[e.facing_raise ? 1 : 0]);
        if (!opener) add(r.by_first_raise[first_raised ? 1 : 0]);
        // Positions count preflop acting order among the non-blind seats.
        const int others = dealt - 2;
        const int pos = position_of(h, e.seat);
        if (others > 0 && pos >= 2) {
          const int order = pos - 2;
          add(r.by_position[static_cast<std::size_t>(std::min(2, 3 * order / others))]);
        }
      }
    }
  }
  return r;
}

std::string FactorReport::to_csv() const {
  std::string out = "factor,level,count,total,ratio,ci_lo,ci_hi\n";
  auto emit = [&](std::string_view factor, const std::vector<Ratio>& rows) {
    for (const auto& r : rows) {
      out += std::string(factor) + ',' + r.label + ',' + std::to_string(r.count) + ',' +
             std::to_string(r.total) + ',';
      if (auto v = r.value()) {
        auto [lo, hi] = r.wald();
        out += format_double(*v) + ',' + format_double(lo) + ',' + format_double(hi);
      } else {
        out += "NA,NA,NA";
      }
      out += '\n';
    }
  };
  emit("position", by_position);
  emit("players", by_players);
  emit("first_raise", by_first_raise);
  emit("facing_raise", by_facing_raise);
  emit("stack", by_stack);
  return out;
}

}  // namespace holdem
