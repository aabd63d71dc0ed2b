#include "holdem/engine.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "holdem/rng.hpp"

namespace holdem {

std::string_view street_name(Street street) {
  static constexpr std::array<std::string_view, 6> kNames = {
      "preflop", "flop", "turn", "river", "showdown", "complete"};
  return kNames[static_cast<int>(street)];
}

Street parse_street(std::string_view text) {
  for (int i = 0; i < 6; ++i) {
    if (street_name(static_cast<Street>(i)) == text) return static_cast<Street>(i);
  }
  throw InvalidInput("unknown street '" + std::string(text) + "'");
}

std::string_view action_name(ActionType action) {
  switch (action) {
    case ActionType::kFold: return "fold";
    case ActionType::kCall: return "call";
    case ActionType::kRaise: return "raise";
  }
  return "?";
}

ActionType parse_action(std::string_view text) {
  if (text == "fold") return ActionType::kFold;
  if (text == "call" || text == "check") return ActionType::kCall;
  if (text == "raise" || text == "bet") return ActionType::kRaise;
  throw InvalidInput("unknown action '" + std::string(text) + "'");
}

void TableConfig::validate() const {
  if (seats < 2 || seats > 10) throw InvalidInput("seats must be 2..10");
  if (small_bet <= 0) throw InvalidInput("small bet must be positive");
  if (big_bet != 2 * small_bet) throw InvalidInput("big bet must be twice the small bet");
  if (small_blind < 0 || big_blind <= 0 || small_blind > big_blind) {
    throw InvalidInput("blinds must satisfy 0 <= small blind <= big blind, big blind > 0");
  }
  if (big_blind > small_bet) throw InvalidInput("blinds may not exceed the small bet");
  if (max_raises_per_round < 1) throw InvalidInput("raise cap must be at least 1");
}

Chips TableConfig::bet_size(Street street) const {
  return street == Street::kTurn || street == Street::kRiver ? big_bet : small_bet;
}

std::vector<ActionType> LegalActions::list() const {
  std::vector<ActionType> out;
  if (fold) out.push_back(ActionType::kFold);
  if (call) out.push_back(ActionType::kCall);
  if (raise) out.push_back(ActionType::kRaise);
  return out;
}

double PlayerView::pot_odds() const {
  const Chips call = to_call();
  if (call <= 0) return 0.0;
  return static_cast<double>(call) / static_cast<double>(pot + call);
}

// ---------------------------------------------------------------------------

void GameState::start(const TableConfig& config, std::vector<Chips> stacks, int button,
                      std::uint64_t hand_id) {
  config.validate();
  if (static_cast<int>(stacks.size()) != config.seats) {
    throw InvalidInput("expected one stack per seat");
  }
  if (button < 0 || button >= config.seats) throw InvalidInput("button seat out of range");
  config_ = config;
  hand_id_ = hand_id;
  const auto n = static_cast<std::size_t>(config.seats);
  stacks_ = std::move(stacks);
  start_stacks_ = stacks_;
  contributed_.assign(n, 0);
  round_bet_.assign(n, 0);
  holes_.assign(n, std::nullopt);
  in_hand_.assign(n, false);
  folded_.assign(n, false);
  all_in_.assign(n, false);
  needs_action_.assign(n, false);
  acted_.assign(n, false);
  int funded = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (stacks_[s] < 0) throw InvalidInput("negative stack");
    in_hand_[s] = stacks_[s] > 0;
    funded += in_hand_[s];
  }
  if (funded < 2) throw CannotStart("need at least two seats with chips");
  button_ = in_hand_[button] ? button : next_seat(button);
  if (funded == 2) {
    sb_seat_ = button_;
    bb_seat_ = next_seat(button_);
  } else {
    sb_seat_ = next_seat(button_);
    bb_seat_ = next_seat(sb_seat_);
  }
}

GameState GameState::new_hand(const TableConfig& config, std::vector<Chips> stacks, int button,
                              std::uint64_t seed, std::uint64_t hand_id) {
  GameState g;
  g.start(config, std::move(stacks), button, hand_id);
  std::array<Card, kDeckSize> deck;
  for (int i = 0; i < kDeckSize; ++i) deck[i] = Card(i);
  Rng rng(seed);
  for (int i = kDeckSize - 1; i > 0; --i) {
    std::swap(deck[i], deck[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }
  // One card at a time from the seat left of the button, twice around.
  std::size_t next = 0;
  std::vector<std::array<Card, 2>> dealt(g.stacks_.size());
  for (int round = 0; round < 2; ++round) {
    int seat = g.button_;
    for (int k = 0; k < g.players_dealt(); ++k) {
      seat = g.next_seat(seat);
      dealt[seat][round] = deck[next++];
    }
  }
  for (std::size_t s = 0; s < dealt.size(); ++s) {
    if (g.in_hand_[s]) g.holes_[s] = HoleCards(dealt[s][0], dealt[s][1]);
  }
  g.full_board_.assign(deck.begin() + static_cast<long>(next),
                       deck.begin() + static_cast<long>(next) + 5);
  g.post_blinds();
  return g;
}

GameState GameState::new_hand_with_cards(const TableConfig& config, std::vector<Chips> stacks,
                                         int button,
                                         const std::vector<std::optional<HoleCards>>& holes,
                                         const std::vector<Card>& board, std::uint64_t hand_id) {
  GameState g;
  g.start(config, std::move(stacks), button, hand_id);
  if (holes.size() > g.stacks_.size() || board.size() > 5) {
    throw InvalidInput("too many preset cards");
  }
  std::vector<Card> known(board);
  for (const auto& h : holes) {
    if (h) known.insert(known.end(), {h->high, h->low});
  }
  std::uint64_t used = card_mask(known);
  auto fill = [&]() {
    for (int i = 0; i < kDeckSize; ++i) {
      if (!(used & (std::uint64_t{1} << i))) {
        used |= std::uint64_t{1} << i;
        return Card(i);
      }
    }
    throw InvalidInput("deck exhausted");
  };
  for (std::size_t s = 0; s < g.stacks_.size(); ++s) {
    if (!g.in_hand_[s]) continue;
    if (s < holes.size() && holes[s]) {
      g.holes_[s] = holes[s];
    } else {
      Card a = fill();
      g.holes_[s] = HoleCards(a, fill());
    }
  }
  g.full_board_ = board;
  while (g.full_board_.size() < 5) g.full_board_.push_back(fill());
  g.post_blinds();
  return g;
}

void GameState::post(int seat, Chips amount) {
  amount = std::min(amount, stacks_[seat]);
  stacks_[seat] -= amount;
  contributed_[seat] += amount;
  round_bet_[seat] += amount;
  if (stacks_[seat] == 0) all_in_[seat] = true;
}

void GameState::post_blinds() {
  post(sb_seat_, config_.small_blind);
  post(bb_seat_, config_.big_blind);
  street_ = Street::kPreflop;
  current_bet_ = config_.big_blind;
  raises_ = 1;  // the big blind is the opening bet
  voluntary_raise_ = false;
  for (std::size_t s = 0; s < stacks_.size(); ++s) {
    needs_action_[s] = in_hand_[s] && !all_in_[s];
  }
  to_act_ = next_to_act(bb_seat_);
  if (to_act_ < 0) advance();
}

int GameState::next_seat(int from) const {
  const int n = config_.seats;
  for (int k = 1; k <= n; ++k) {
    int s = (from + k) % n;
    if (in_hand_[s]) return s;
  }
  return from;
}

int GameState::live_unallin_count() const {
  int count = 0;
  for (std::size_t s = 0; s < stacks_.size(); ++s) {
    count += in_hand_[s] && !folded_[s] && !all_in_[s];
  }
  return count;
}

bool GameState::seat_can_act(int seat) const {
  if (!in_hand_[seat] || folded_[seat] || all_in_[seat] || !needs_action_[seat]) return false;
  // A lone player with chips who has matched the bet has nothing to decide.
  if (live_unallin_count() == 1 && round_bet_[seat] >= current_bet_) return false;
  return true;
}

int GameState::next_to_act(int from) const {
  const int n = config_.seats;
  for (int k = 1; k <= n; ++k) {
    int s = (from + k) % n;
    if (seat_can_act(s)) return s;
  }
  return -1;
}

int GameState::players_dealt() const {
  return static_cast<int>(std::count(in_hand_.begin(), in_hand_.end(), true));
}

int GameState::active_players() const {
  int count = 0;
  for (std::size_t s = 0; s < stacks_.size(); ++s) count += in_hand_[s] && !folded_[s];
  return count;
}

int GameState::position_index(int seat) const {
  int index = 0;
  int s = next_seat(button_);
  while (s != seat) {
    s = next_seat(s);
    ++index;
    if (index > config_.seats) throw InvalidInput("seat not dealt in");
  }
  return index;
}

Chips GameState::pot() const {
  return std::accumulate(contributed_.begin(), contributed_.end(), Chips{0});
}

std::vector<Card> GameState::board() const {
  std::size_t shown = 0;
  switch (street_) {
    case Street::kPreflop: shown = 0; break;
    case Street::kFlop: shown = 3; break;
    case Street::kTurn: shown = 4; break;
    default: shown = 5; break;
  }
  if (street_ == Street::kComplete && result_ && !result_->went_to_showdown) {
    shown = result_->board.size();
  }
  return {full_board_.begin(), full_board_.begin() + static_cast<long>(shown)};
}

LegalActions GameState::legal_actions() const {
  LegalActions legal;
  if (street_ == Street::kComplete || street_ == Street::kShowdown || to_act_ < 0) return legal;
  const int seat = to_act_;
  legal.to_call = std::min(current_bet_ - round_bet_[seat], stacks_[seat]);
  legal.fold = legal.to_call > 0;
  legal.call = true;
  const bool capped =
      !(config_.uncapped_heads_up && players_dealt() == 2) && raises_ >= config_.max_raises_per_round;
  const bool opponent_can_respond = live_unallin_count() > 1;
  legal.raise = !capped && stacks_[seat] > legal.to_call && opponent_can_respond;
  if (legal.raise) {
    Chips target = current_bet_ + config_.bet_size(street_);
    legal.raise_cost = std::min(target - round_bet_[seat], stacks_[seat]);
  }
  return legal;
}

ActionEvent GameState::apply(ActionType action) {
  const LegalActions legal = legal_actions();
  if (street_ == Street::kComplete) throw IllegalAction("hand is complete");
  if (!legal.contains(action)) {
    switch (action) {
      case ActionType::kFold:
        throw IllegalAction("fold is only legal when facing a bet");
      case ActionType::kRaise:
        throw IllegalAction(raises_ >= config_.max_raises_per_round
                                ? "raise cap reached for this round"
                                : "raise needs chips beyond the call and a live opponent");
      default:
        throw IllegalAction("no seat to act");
    }
  }
  const int seat = to_act_;
  ActionEvent ev;
  ev.seat = seat;
  ev.action = action;
  ev.to_call = legal.to_call;
  ev.street = street_;
  ev.facing_raise = voluntary_raise_ && legal.to_call > 0;
  ev.first_decision = !acted_[seat];

  switch (action) {
    case ActionType::kFold:
      folded_[seat] = true;
      break;
    case ActionType::kCall:
      ev.amount = legal.to_call;
      post(seat, legal.to_call);
      break;
    case ActionType::kRaise: {
      ev.amount = legal.raise_cost;
      post(seat, legal.raise_cost);
      current_bet_ = std::max(current_bet_, round_bet_[seat]);
      ++raises_;
      voluntary_raise_ = true;
      for (std::size_t s = 0; s < stacks_.size(); ++s) {
        if (static_cast<int>(s) != seat && in_hand_[s] && !folded_[s] && !all_in_[s]) {
          needs_action_[s] = true;
        }
      }
      break;
    }
  }
  needs_action_[seat] = false;
  acted_[seat] = true;
  events_.push_back(ev);

  if (active_players() == 1) {
    settle_fold_out();
    return ev;
  }
  to_act_ = next_to_act(seat);
  if (to_act_ < 0) advance();
  return ev;
}

void GameState::begin_street(Street street) {
  street_ = street;
  current_bet_ = 0;
  raises_ = 0;
  voluntary_raise_ = false;
  std::fill(round_bet_.begin(), round_bet_.end(), 0);
  std::fill(acted_.begin(), acted_.end(), false);
  for (std::size_t s = 0; s < stacks_.size(); ++s) {
    needs_action_[s] = in_hand_[s] && !folded_[s] && !all_in_[s];
  }
}

void GameState::advance() {
  // Betting round closed: move on until someone has a decision or the hand ends.
  while (true) {
    if (street_ == Street::kRiver) {
      settle_showdown();
      return;
    }
    begin_street(static_cast<Street>(static_cast<int>(street_) + 1));
    if (live_unallin_count() <= 1) continue;  // run out the board
    to_act_ = next_to_act(button_);
    if (to_act_ >= 0) return;
  }
}

void GameState::settle_fold_out() {
  int survivor = -1;
  for (std::size_t s = 0; s < stacks_.size(); ++s) {
    if (in_hand_[s] && !folded_[s]) survivor = static_cast<int>(s);
  }
  PotAward award;
  award.amount = pot();
  award.eligible = {survivor};
  award.winners = {survivor};
  finish({award}, false);
}

void GameState::settle_showdown() {
  street_ = Street::kShowdown;
  const int n = config_.seats;
  std::vector<HandRank> ranks(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    if (!in_hand_[s] || folded_[s]) continue;
    PartialHand h(full_board_);
    h.add(holes_[s]->high);
    h.add(holes_[s]->low);
    ranks[s] = h.rank();
  }

  std::vector<Chips> levels;
  for (int s = 0; s < n; ++s) {
    if (contributed_[s] > 0) levels.push_back(contributed_[s]);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  // Odd chips go to winners in clockwise order starting left of the button.
  std::vector<int> order;
  for (int k = 1; k <= n; ++k) order.push_back((button_ + k) % n);

  std::vector<PotAward> pots;
  Chips previous = 0;
  for (Chips level : levels) {
    PotAward band;
    for (int s = 0; s < n; ++s) {
      band.amount += std::min(contributed_[s], level) - std::min(contributed_[s], previous);
    }
    for (int s : order) {
      if (in_hand_[s] && !folded_[s] && contributed_[s] >= level) band.eligible.push_back(s);
    }
    previous = level;
    if (band.amount == 0) continue;
    if (!pots.empty() && pots.back().eligible == band.eligible) {
      pots.back().amount += band.amount;
    } else {
      pots.push_back(std::move(band));
    }
  }

  for (auto& pot : pots) {
    if (pot.eligible.empty()) {
      // Unreachable while folds require facing a bet; keep chips with the
      // largest live contributor so conservation still holds.
      int best = -1;
      for (int s : order) {
        if (in_hand_[s] && !folded_[s] && (best < 0 || contributed_[s] > contributed_[best])) best = s;
      }
      pot.eligible = {best};
    }
    HandRank best = ranks[pot.eligible.front()];
    for (int s : pot.eligible) best = std::max(best, ranks[s]);
    for (int s : pot.eligible) {
      if (ranks[s] == best) pot.winners.push_back(s);
    }
  }
  finish(std::move(pots), true);
}

void GameState::finish(std::vector<PotAward> pots, bool showdown) {
  const int n = config_.seats;
  for (const auto& pot : pots) {
    const Chips k = static_cast<Chips>(pot.winners.size());
    const Chips share = pot.amount / k;
    Chips odd = pot.amount % k;
    for (int s : pot.winners) {  // already in clockwise order from the button
      stacks_[s] += share + (odd > 0 ? 1 : 0);
      if (odd > 0) --odd;
    }
  }
  HandResult r;
  r.hand_id = hand_id_;
  r.net.resize(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) r.net[s] = stacks_[s] - start_stacks_[s];
  if (showdown) {
    for (int s = 0; s < n; ++s) {
      if (in_hand_[s] && !folded_[s]) r.showdown.emplace_back(s, *holes_[s]);
    }
    r.board = full_board_;
  } else {
    r.board = board();
  }
  r.events = events_;
  r.pots = std::move(pots);
  r.went_to_showdown = showdown;
  result_ = std::move(r);
  std::fill(contributed_.begin(), contributed_.end(), 0);
  std::fill(round_bet_.begin(), round_bet_.end(), 0);
  street_ = Street::kComplete;
  to_act_ = -1;
}

const HandResult& GameState::result() const {
  if (!result_) throw std::logic_error("hand is not complete");
  return *result_;
}

PlayerView GameState::view(int seat) const {
  PlayerView v;
  v.config = config_;
  v.hand_id = hand_id_;
  v.street = street_;
  v.button = button_;
  v.small_blind_seat = sb_seat_;
  v.big_blind_seat = bb_seat_;
  v.hero = seat;
  if (holes_[seat]) v.hole = *holes_[seat];
  v.board = board();
  for (int s = 0; s < config_.seats; ++s) {
    v.seats.push_back({s, stacks_[s], round_bet_[s], contributed_[s], in_hand_[s], folded_[s],
                       all_in_[s]});
  }
  v.pot = pot();
  v.current_bet = current_bet_;
  v.raises_this_round = raises_;
  if (seat == to_act_) {
    v.legal = legal_actions();
    v.facing_raise = voluntary_raise_ && v.legal.to_call > 0;
    v.first_decision = !acted_[seat];
  }
  v.history = events_;
  v.players_dealt = players_dealt();
  v.active_players = active_players();
  v.position_index = in_hand_[seat] ? position_index(seat) : 0;
  return v;
}

std::pair<GameState, std::vector<ActionEvent>> apply_action(GameState state, ActionType action) {
  ActionEvent ev = state.apply(action);
  return {std::move(state), {ev}};
}

HandResult replay_hand(const TableConfig& config, const std::vector<Chips>& stacks, int button,
                       std::uint64_t seed, std::uint64_t hand_id,
                       const std::vector<ActionType>& actions) {
  GameState g = GameState::new_hand(config, stacks, button, seed, hand_id);
  for (ActionType a : actions) g.apply(a);
  if (!g.is_complete()) throw InvalidInput("action list ends before the hand completes");
  return g.result();
}

}  // namespace holdem
