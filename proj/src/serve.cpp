#include "holdem/serve.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <istream>
#include <ostream>

#include "holdem/registry.hpp"
#include "json.hpp"

namespace holdem {

using Json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kDeckStream = 0x5e7e;
constexpr std::uint64_t kAgentStream = 0xa6e7;

Json cards_json(std::span<const Card> cards) {
  Json out = Json::array();
  for (const Card& c : cards) out.push_back(c.str());
  return out;
}

Json error(std::string_view code, std::string_view message) {
  return Json{{"type", "error"}, {"code", code}, {"message", message}};
}

}  // namespace

struct ServeSession::Impl {
  ServeConfig config;
  std::vector<std::string> names;
  std::vector<std::unique_ptr<Agent>> agents;
  std::vector<Rng> rngs;
  std::vector<Chips> stacks;
  std::vector<long long> rebuys;
  std::optional<GameState> game;
  ProfileBook book;
  std::uint64_t next_hand = 0;
  std::uint64_t seq = 0;
  long long hands_played = 0;
  bool closed = false;
  std::vector<Json> out;

  explicit Impl(ServeConfig c) : config(std::move(c)) {
    if (config.opponents.empty() || config.opponents.size() > 9) {
      throw InvalidInput("serve: between 1 and 9 opponents required");
    }
    config.table.seats = static_cast<int>(config.opponents.size()) + 1;
    config.table.validate();
    if (config.starting_stack <= 0) throw InvalidInput("serve: starting stack must be positive");
    names.push_back("human");
    agents.push_back(nullptr);
    for (const auto& name : config.opponents) {
      agents.push_back(make_agent(name));
      names.push_back(name);
    }
    for (int s = 0; s < config.table.seats; ++s) {
      rngs.emplace_back(derive_seed(config.seed, {kAgentStream, static_cast<std::uint64_t>(s)}));
    }
    stacks.assign(static_cast<std::size_t>(config.table.seats), config.starting_stack);
    rebuys.assign(stacks.size(), 0);
  }

  bool hand_running() const { return game && !game->is_complete(); }
  bool hero_to_act() const { return hand_running() && game->to_act() == kHeroSeat; }

  Json legal_json() const {
    const LegalActions l = game->legal_actions();
    return Json{{"fold", l.fold}, {"call", l.call}, {"raise", l.raise}, {"to_call", l.to_call}};
  }

  Json event_json(const ActionEvent& e) const {
    return Json{{"seat", e.seat},
                {"action", action_name(e.action)},
                {"amount", e.amount},
                {"to_call", e.to_call},
                {"street", street_name(e.street)}};
  }

  Json stats_json() const {
    Json players = Json::array();
    for (int s = 1; s < config.table.seats; ++s) {
      const OpponentProfile* p = book.find(s);
      const OpponentProfile empty;
      const OpponentProfile& prof = p ? *p : empty;
      players.push_back(Json{{"seat", s},
                             {"name", names[s]},
                             {"hands", prof.hands_observed()},
                             {"vpip", prof.vpip()},
                             {"af", aggression_factor(prof)},
                             {"type", type_name(classify(prof))}});
    }
    return Json{{"type", "stats"}, {"players", players}};
  }

  // Everything the human may see right now.
  Json snapshot() const {
    Json j{{"type", "snapshot"}, {"seq", seq}, {"hands_played", hands_played}};
    if (!game) {
      j["hand"] = nullptr;
      j["stacks"] = stacks;
      return j;
    }
    const GameState& g = *game;
    const PlayerView v = g.view(kHeroSeat);
    Json seats = Json::array();
    for (const auto& sv : v.seats) {
      seats.push_back(Json{{"seat", sv.seat},
                           {"name", names[sv.seat]},
                           {"stack", sv.stack},
                           {"round_bet", sv.round_bet},
                           {"in_hand", sv.in_hand},
                           {"folded", sv.folded},
                           {"all_in", sv.all_in}});
    }
    Json history = Json::array();
    for (const auto& e : v.history) history.push_back(event_json(e));
    j["hand"] = Json{{"hand_id", v.hand_id},
                     {"street", street_name(g.street())},
                     {"button", v.button},
                     {"board", cards_json(v.board)},
                     {"pot", v.pot},
                     {"hole", g.hole(kHeroSeat) ? Json(g.hole(kHeroSeat)->str()) : Json(nullptr)},
                     {"seats", seats},
                     {"history", history},
                     {"to_act", hand_running() ? Json(g.to_act()) : Json(nullptr)},
                     {"legal", hero_to_act() ? legal_json() : Json(nullptr)}};
    j["stacks"] = stacks;
    j["stats"] = stats_json()["players"];
    return j;
  }

  void emit_legal() { out.push_back(Json{{"type", "legal"}, {"seq", seq}, {"legal", legal_json()}}); }

  void apply(int seat, ActionType action) {
    GameState& g = *game;
    const std::size_t board_before = g.board().size();
    Observation obs;
    obs.hand_id = g.hand_id();
    obs.player = seat;
    obs.board = g.board();
    obs.event = g.apply(action);
    ++seq;
    book.observe(seat, obs.hand_id, obs.event);
    for (auto& a : agents) {
      if (a) a->observe(obs);
    }
    Json e = event_json(obs.event);
    e["type"] = "event";
    e["seq"] = seq;
    e["hand_id"] = obs.hand_id;
    out.push_back(std::move(e));
    if (g.board().size() != board_before && !g.is_complete()) {
      out.push_back(Json{{"type", "street"}, {"street", street_name(g.street())}, {"board", cards_json(g.board())}});
    }
  }

  // Agents act until the human is to act or the hand ends.
  void advance() {
    GameState& g = *game;
    while (!g.is_complete() && g.to_act() != kHeroSeat) {
      const int seat = g.to_act();
      const PlayerView v = g.view(seat);
      ActionType a = ActionType::kFold;
      try {
        a = agents[seat]->decide(v, rngs[seat]).action;
        if (!v.legal.contains(a)) a = legalize(ActionType::kFold, v.legal);
      } catch (const std::exception&) {
        a = legalize(ActionType::kFold, v.legal);
      }
      apply(seat, a);
    }
    if (g.is_complete()) finish();
    else emit_legal();
  }

  void finish() {
    const GameState& g = *game;
    const HandResult& r = g.result();
    for (int s = 1; s < config.table.seats; ++s) {
      if (g.in_hand(s)) agents[s]->end_hand(g.view(s), r);
    }
    Json showdown = Json::array();
    for (const auto& [seat, hole] : r.showdown) showdown.push_back(Json{{"seat", seat}, {"hole", hole.str()}});
    for (std::size_t s = 0; s < stacks.size(); ++s) {
      stacks[s] += r.net[s];
      if (stacks[s] == 0) {
        stacks[s] = config.starting_stack;
        ++rebuys[s];
      }
    }
    ++hands_played;
    ++seq;
    out.push_back(Json{{"type", "hand_result"},
                       {"seq", seq},
                       {"hand_id", r.hand_id},
                       {"net", r.net},
                       {"board", cards_json(r.board)},
                       {"showdown", showdown},
                       {"stacks", stacks}});
    out.push_back(stats_json());
  }

  void deal() {
    const std::uint64_t id = next_hand++;
    const int seats = config.table.seats;
    game = GameState::new_hand(config.table, stacks, static_cast<int>(id % static_cast<std::uint64_t>(seats)),
                               derive_seed(config.seed, {kDeckStream, id}), id);
    ++seq;
    std::vector<int> dealt;
    for (int s = 0; s < seats; ++s) {
      if (game->in_hand(s)) dealt.push_back(s);
    }
    book.begin_hand(id, dealt);
    for (int s = 1; s < seats; ++s) {
      if (game->in_hand(s)) agents[s]->begin_hand(game->view(s));
    }
    out.push_back(Json{{"type", "hand_start"},
                       {"seq", seq},
                       {"hand_id", id},
                       {"button", game->button()},
                       {"hole", game->hole(kHeroSeat)->str()},
                       {"stacks", stacks}});
    advance();
  }

  void on_action(const Json& msg) {
    if (!msg.contains("seq") || !msg["seq"].is_number_unsigned()) {
      out.push_back(error("bad_request", "action needs a numeric seq"));
      return;
    }
    if (!msg.contains("action") || !msg["action"].is_string()) {
      out.push_back(error("bad_request", "action needs an action name"));
      return;
    }
    if (msg["seq"].get<std::uint64_t>() != seq) {
      Json e = error("stale", "state has moved on; resync");
      e["seq"] = seq;
      out.push_back(std::move(e));
      return;
    }
    if (!hero_to_act()) {
      out.push_back(error("not_your_turn", "no decision is pending"));
      return;
    }
    ActionType a;
    try {
      a = parse_action(msg["action"].get<std::string>());
    } catch (const InvalidInput& e) {
      out.push_back(error("bad_request", e.what()));
      return;
    }
    if (!game->legal_actions().contains(a)) {
      Json e = error("illegal", std::string(action_name(a)) + " is not legal now");
      e["legal"] = legal_json();
      out.push_back(std::move(e));
      return;
    }
    apply(kHeroSeat, a);
    advance();
  }

  void handle(const Json& msg) {
    const std::string type = msg.contains("type") && msg["type"].is_string() ? msg["type"].get<std::string>() : "";
    if (type == "hello") {
      out.push_back(Json{{"type", "welcome"},
                         {"protocol", kProtocolVersion},
                         {"seat", kHeroSeat},
                         {"players", names},
                         {"table",
                          {{"small_bet", config.table.small_bet},
                           {"big_bet", config.table.big_bet},
                           {"small_blind", config.table.small_blind},
                           {"big_blind", config.table.big_blind},
                           {"max_raises", config.table.max_raises_per_round}}}});
      if (!game) {
        deal();
        out.push_back(snapshot());
        return;
      }
      out.push_back(snapshot());
    } else if (type == "resync") {
      out.push_back(snapshot());
    } else if (type == "deal") {
      if (hand_running()) out.push_back(error("hand_in_progress", "finish the current hand first"));
      else deal();
    } else if (type == "action") {
      on_action(msg);
    } else if (type == "stats") {
      out.push_back(stats_json());
    } else if (type == "quit") {
      closed = true;
      out.push_back(Json{{"type", "bye"}, {"hands_played", hands_played}});
    } else {
      out.push_back(error("unknown_type", "unknown message type '" + type + "'"));
    }
  }
};

ServeSession::ServeSession(ServeConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
ServeSession::~ServeSession() = default;

bool ServeSession::closed() const { return impl_->closed; }
std::uint64_t ServeSession::seq() const { return impl_->seq; }
long long ServeSession::hands_played() const { return impl_->hands_played; }

std::vector<std::string> ServeSession::handle(std::string_view line) {
  impl_->out.clear();
  if (impl_->closed) {
    impl_->out.push_back(error("closed", "session is closed"));
  } else {
    const Json msg = Json::parse(line, nullptr, false);
    if (msg.is_discarded() || !msg.is_object()) {
      impl_->out.push_back(error("bad_json", "expected one JSON object per line"));
    } else {
      impl_->handle(msg);
    }
  }
  std::vector<std::string> lines;
  for (const auto& j : impl_->out) lines.push_back(j.dump());
  impl_->out.clear();
  return lines;
}

void serve_stream(ServeSession& session, std::istream& in, std::ostream& out) {
  std::string line;
  while (!session.closed() && std::getline(in, line)) {
    if (line.empty()) continue;
    for (const auto& reply : session.handle(line)) out << reply << '\n';
    out.flush();
  }
}

namespace {

bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n <= 0) return false;
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

void serve_connection(ServeSession& session, int fd) {
  std::string buffer;
  char chunk[4096];
  while (!session.closed()) {
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n <= 0) return;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t nl;
    while ((nl = buffer.find('\n')) != std::string::npos) {
      const std::string line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      if (line.empty() || line == "\r") continue;
      std::string reply;
      for (const auto& r : session.handle(line)) reply += r + '\n';
      if (!send_all(fd, reply)) return;
      if (session.closed()) return;
    }
  }
}

}  // namespace

void serve_tcp(ServeSession& session, int port, int max_connections, const std::function<void(int)>& on_listening) {
  const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) throw InvalidInput("serve: cannot create socket");
  const int yes = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listener, 1) < 0) {
    ::close(listener);
    throw InvalidInput("serve: cannot listen on port " + std::to_string(port));
  }
  socklen_t len = sizeof addr;
  ::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
  if (on_listening) on_listening(ntohs(addr.sin_port));
  for (int served = 0; !session.closed() && (max_connections == 0 || served < max_connections); ++served) {
    const int fd = ::accept(listener, nullptr, nullptr);
    if (fd < 0) break;
    serve_connection(session, fd);
    ::close(fd);
  }
  ::close(listener);
}

}  // namespace holdem
