#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "holdem/cards.hpp"

namespace holdem {

using Chips = std::int64_t;

enum class Street : std::uint8_t { kPreflop, kFlop, kTurn, kRiver, kShowdown, kComplete };

std::string_view street_name(Street street);
Street parse_street(std::string_view text);

/// Call covers check, raise covers bet.
enum class ActionType : std::uint8_t { kFold, kCall, kRaise };

std::string_view action_name(ActionType action);
ActionType parse_action(std::string_view text);

/// Fixed-limit table rules. Small bets on preflop and flop, big bets on turn
/// and river. Preflop the big blind counts as the opening bet toward the cap.
struct TableConfig {
  int seats = 2;
  Chips small_bet = 2;
  Chips big_bet = 4;
  Chips small_blind = 1;
  Chips big_blind = 2;
  int max_raises_per_round = 4;
  /// Lift the raise cap when only two players are dealt in.
  bool uncapped_heads_up = false;

  /// Throws InvalidInput when the invariants do not hold.
  void validate() const;
  Chips bet_size(Street street) const;

  friend bool operator==(const TableConfig&, const TableConfig&) = default;
};

struct ActionEvent {
  int seat = 0;
  ActionType action = ActionType::kCall;
  /// Chips this action moved from the seat's stack into the pot.
  Chips amount = 0;
  /// Chips owed before acting; zero means the seat could check.
  Chips to_call = 0;
  Street street = Street::kPreflop;
  /// A voluntary bet or raise this round was outstanding for the actor.
  bool facing_raise = false;
  bool first_decision = false;

  friend bool operator==(const ActionEvent&, const ActionEvent&) = default;
};

struct LegalActions {
  bool fold = false;
  bool call = false;
  bool raise = false;
  Chips to_call = 0;
  /// Chips a raise would move (may be less than a full raise when all-in).
  Chips raise_cost = 0;

  bool contains(ActionType a) const {
    return a == ActionType::kFold ? fold : (a == ActionType::kCall ? call : raise);
  }
  bool check_available() const { return call && to_call == 0; }
  std::vector<ActionType> list() const;
};

struct PotAward {
  Chips amount = 0;
  std::vector<int> eligible;
  std::vector<int> winners;
};

struct HandResult {
  std::uint64_t hand_id = 0;
  /// Final stack minus starting stack, per seat; sums to zero.
  std::vector<Chips> net;
  /// Hole cards of seats that reached showdown.
  std::vector<std::pair<int, HoleCards>> showdown;
  std::vector<Card> board;
  std::vector<ActionEvent> events;
  std::vector<PotAward> pots;
  bool went_to_showdown = false;
};

/// Thrown for an action outside legal_actions(); the state is left unchanged.
class IllegalAction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by new_hand when fewer than two seats hold chips.
class CannotStart : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SeatView {
  int seat = 0;
  Chips stack = 0;
  Chips round_bet = 0;
  Chips contributed = 0;
  bool in_hand = false;
  bool folded = false;
  bool all_in = false;
};

/// Everything one seat is allowed to see when it acts.
struct PlayerView {
  TableConfig config;
  std::uint64_t hand_id = 0;
  Street street = Street::kPreflop;
  int button = 0;
  int small_blind_seat = 0;
  int big_blind_seat = 0;
  int hero = 0;
  HoleCards hole;
  std::vector<Card> board;
  std::vector<SeatView> seats;
  Chips pot = 0;
  Chips current_bet = 0;
  int raises_this_round = 0;
  bool facing_raise = false;
  bool first_decision = false;
  LegalActions legal;
  std::vector<ActionEvent> history;
  int players_dealt = 0;
  /// Dealt seats that have not folded.
  int active_players = 0;
  /// Clockwise distance from the seat left of the button: 0 for that seat,
  /// players_dealt - 1 for the button.
  int position_index = 0;
  /// Player identity per seat, filled by the harness (defaults to seat index).
  std::vector<int> players;

  Chips to_call() const { return legal.to_call; }
  double pot_odds() const;
  int player_at(int seat) const {
    return players.empty() ? seat : players[static_cast<std::size_t>(seat)];
  }
};

class GameState {
 public:
  /// Posts blinds and deals from a shuffle determined by `seed`. Seats with an
  /// empty stack sit the hand out. If `button` is not funded, the next funded
  /// seat clockwise takes it.
  static GameState new_hand(const TableConfig& config, std::vector<Chips> stacks, int button,
                            std::uint64_t seed, std::uint64_t hand_id = 0);

  /// Same, but with explicitly placed cards; unknown holes and board cards are
  /// filled from the remaining deck in index order.
  static GameState new_hand_with_cards(const TableConfig& config, std::vector<Chips> stacks,
                                       int button, const std::vector<std::optional<HoleCards>>& holes,
                                       const std::vector<Card>& board, std::uint64_t hand_id = 0);

  LegalActions legal_actions() const;
  /// Applies the action for the seat to act. Throws IllegalAction (state
  /// unchanged) if it is not legal.
  ActionEvent apply(ActionType action);

  const TableConfig& config() const { return config_; }
  std::uint64_t hand_id() const { return hand_id_; }
  Street street() const { return street_; }
  bool is_complete() const { return street_ == Street::kComplete; }
  int button() const { return button_; }
  int small_blind_seat() const { return sb_seat_; }
  int big_blind_seat() const { return bb_seat_; }
  int to_act() const { return to_act_; }
  Chips current_bet() const { return current_bet_; }
  int raises_this_round() const { return raises_; }
  const std::vector<Chips>& stacks() const { return stacks_; }
  const std::vector<Chips>& starting_stacks() const { return start_stacks_; }
  const std::vector<Chips>& contributions() const { return contributed_; }
  const std::vector<Chips>& round_bets() const { return round_bet_; }
  Chips pot() const;
  /// Board cards revealed so far.
  std::vector<Card> board() const;
  /// All five board cards, including those not yet revealed.
  const std::vector<Card>& full_board() const { return full_board_; }
  const std::optional<HoleCards>& hole(int seat) const { return holes_[seat]; }
  bool in_hand(int seat) const { return in_hand_[seat]; }
  bool folded(int seat) const { return folded_[seat]; }
  bool all_in(int seat) const { return all_in_[seat]; }
  const std::vector<ActionEvent>& events() const { return events_; }
  int players_dealt() const;
  int active_players() const;
  int position_index(int seat) const;

  /// Valid once is_complete().
  const HandResult& result() const;

  PlayerView view(int seat) const;

 private:
  GameState() = default;
  void start(const TableConfig& config, std::vector<Chips> stacks, int button,
             std::uint64_t hand_id);
  void post_blinds();
  void post(int seat, Chips amount);
  int next_seat(int from) const;
  int next_to_act(int from) const;
  bool seat_can_act(int seat) const;
  int live_unallin_count() const;
  void advance();
  void begin_street(Street street);
  void settle_fold_out();
  void settle_showdown();
  void finish(std::vector<PotAward> pots, bool showdown);

  TableConfig config_;
  std::uint64_t hand_id_ = 0;
  Street street_ = Street::kPreflop;
  int button_ = 0;
  int sb_seat_ = 0;
  int bb_seat_ = 0;
  int to_act_ = -1;
  Chips current_bet_ = 0;
  int raises_ = 0;
  bool voluntary_raise_ = false;
  std::vector<Chips> stacks_;
  std::vector<Chips> start_stacks_;
  std::vector<Chips> contributed_;
  std::vector<Chips> round_bet_;
  std::vector<std::optional<HoleCards>> holes_;
  std::vector<Card> full_board_;
  std::vector<bool> in_hand_;
  std::vector<bool> folded_;
  std::vector<bool> all_in_;
  std::vector<bool> needs_action_;
  std::vector<bool> acted_;
  std::vector<ActionEvent> events_;
  std::optional<HandResult> result_;
};

/// Functional form: returns the successor state and the events produced.
std::pair<GameState, std::vector<ActionEvent>> apply_action(GameState state, ActionType action);

/// Replays `actions` on a fresh hand dealt from `seed`; used to verify logs.
HandResult replay_hand(const TableConfig& config, const std::vector<Chips>& stacks, int button,
                       std::uint64_t seed, std::uint64_t hand_id,
                       const std::vector<ActionType>& actions);

}  // namespace holdem
