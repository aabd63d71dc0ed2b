#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "holdem/engine.hpp"
#include "holdem/rng.hpp"
#include "oracle.hpp"

using namespace holdem;

namespace {

TableConfig table(int seats) {
  TableConfig c;
  c.seats = seats;
  return c;
}

// Slice-by-slice payout: every chip level is its own pot, split as a real
// number among the best live hands that paid into it.
std::vector<double> oracle_payout(const GameState& g, const std::vector<Chips>& contributed) {
  const int n = g.config().seats;
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  std::vector<HandRank> rank(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    if (!g.in_hand(s) || g.folded(s)) continue;
    std::vector<Card> seven = g.full_board();
    seven.push_back(g.hole(s)->high);
    seven.push_back(g.hole(s)->low);
    rank[s] = oracle::best_of_subsets(seven);
  }
  Chips top = *std::max_element(contributed.begin(), contributed.end());
  for (Chips level = 1; level <= top; ++level) {
    int payers = 0;
    std::vector<int> live;
    for (int s = 0; s < n; ++s) {
      if (contributed[s] >= level) {
        ++payers;
        if (g.in_hand(s) && !g.folded(s)) live.push_back(s);
      }
    }
    HandRank best{};
    for (int s : live) best = std::max(best, rank[s]);
    std::vector<int> win;
    for (int s : live)
      if (rank[s] == best) win.push_back(s);
    for (int s : win) out[s] += static_cast<double>(payers) / static_cast<double>(win.size());
  }
  return out;
}

ActionType random_legal(const LegalActions& legal, Rng& rng) {
  auto options = legal.list();
  return options[rng.below(options.size())];
}

}  // namespace

TEST(Engine, FoldOutHeadsUpGivesBlindToBigBlind) {
  auto g = GameState::new_hand(table(2), {100, 100}, 0, 7);
  EXPECT_EQ(g.small_blind_seat(), 0);
  EXPECT_EQ(g.big_blind_seat(), 1);
  EXPECT_EQ(g.to_act(), 0);
  g.apply(ActionType::kFold);
  ASSERT_TRUE(g.is_complete());
  EXPECT_EQ(g.result().net, (std::vector<Chips>{-1, 1}));
  EXPECT_FALSE(g.result().went_to_showdown);
  EXPECT_TRUE(g.result().board.empty());
}

TEST(Engine, HeadsUpBigBlindActsFirstAfterFlop) {
  auto g = GameState::new_hand(table(2), {100, 100}, 1, 3);
  EXPECT_EQ(g.to_act(), 1);
  g.apply(ActionType::kCall);
  EXPECT_EQ(g.to_act(), 0);
  EXPECT_TRUE(g.legal_actions().check_available());
  g.apply(ActionType::kCall);
  EXPECT_EQ(g.street(), Street::kFlop);
  EXPECT_EQ(g.to_act(), 0);
  EXPECT_EQ(g.board().size(), 3u);
}

TEST(Engine, TenSeatBlindsOrderAndDeal) {
  auto g = GameState::new_hand(table(10), std::vector<Chips>(10, 200), 4, 99);
  EXPECT_EQ(g.small_blind_seat(), 5);
  EXPECT_EQ(g.big_blind_seat(), 6);
  EXPECT_EQ(g.to_act(), 7);
  EXPECT_EQ(g.position_index(5), 0);
  EXPECT_EQ(g.position_index(4), 9);
  std::vector<Card> all = g.full_board();
  for (int s = 0; s < 10; ++s) {
    all.push_back(g.hole(s)->high);
    all.push_back(g.hole(s)->low);
  }
  EXPECT_NO_THROW(card_mask(all));  // 25 distinct cards
  EXPECT_EQ(all.size(), 25u);
}

TEST(Engine, SameSeedSameDealDifferentSeedDiffers) {
  auto a = GameState::new_hand(table(6), std::vector<Chips>(6, 50), 0, 11);
  auto b = GameState::new_hand(table(6), std::vector<Chips>(6, 50), 0, 11);
  auto c = GameState::new_hand(table(6), std::vector<Chips>(6, 50), 0, 12);
  EXPECT_EQ(a.full_board(), b.full_board());
  EXPECT_EQ(a.hole(3), b.hole(3));
  EXPECT_NE(a.full_board(), c.full_board());
}

TEST(Engine, RaiseCapCountsBigBlindPreflop) {
  auto g = GameState::new_hand(table(3), {100, 100, 100}, 0, 5);
  g.apply(ActionType::kRaise);
  g.apply(ActionType::kRaise);
  g.apply(ActionType::kRaise);
  EXPECT_EQ(g.raises_this_round(), 4);
  EXPECT_FALSE(g.legal_actions().raise);
  EXPECT_EQ(g.current_bet(), 8);
  g.apply(ActionType::kCall);
  g.apply(ActionType::kCall);
  ASSERT_EQ(g.street(), Street::kFlop);
  for (int i = 0; i < 4; ++i) {
    ASSERT_TRUE(g.legal_actions().raise);
    g.apply(ActionType::kRaise);
  }
  EXPECT_FALSE(g.legal_actions().raise);
}

TEST(Engine, UncappedHeadsUpOption) {
  TableConfig c = table(2);
  c.uncapped_heads_up = true;
  auto g = GameState::new_hand(c, {1000, 1000}, 0, 5);
  for (int i = 0; i < 10; ++i) g.apply(ActionType::kRaise);
  EXPECT_TRUE(g.legal_actions().raise);
}

TEST(Engine, FoldWithFreeCheckIsIllegalAndStateUnchanged) {
  auto g = GameState::new_hand(table(2), {100, 100}, 0, 5);
  g.apply(ActionType::kCall);
  ASSERT_TRUE(g.legal_actions().check_available());
  auto stacks = g.stacks();
  auto events = g.events().size();
  int actor = g.to_act();
  EXPECT_THROW(g.apply(ActionType::kFold), IllegalAction);
  EXPECT_EQ(g.stacks(), stacks);
  EXPECT_EQ(g.events().size(), events);
  EXPECT_EQ(g.to_act(), actor);
}

TEST(Engine, ApplyAfterCompletionThrows) {
  auto g = GameState::new_hand(table(2), {100, 100}, 0, 5);
  g.apply(ActionType::kFold);
  EXPECT_THROW(g.apply(ActionType::kCall), IllegalAction);
}

TEST(Engine, UnfundedSeatsSitOutAndButtonMoves) {
  auto g = GameState::new_hand(table(4), {0, 50, 0, 50}, 0, 5);
  EXPECT_EQ(g.button(), 1);
  EXPECT_EQ(g.players_dealt(), 2);
  EXPECT_EQ(g.small_blind_seat(), 1);
  EXPECT_EQ(g.big_blind_seat(), 3);
  EXPECT_FALSE(g.hole(0).has_value());
  EXPECT_THROW(GameState::new_hand(table(3), {0, 0, 9}, 0, 1), CannotStart);
}

TEST(Engine, BadConfigRejected) {
  TableConfig c = table(2);
  c.big_bet = 5;
  EXPECT_THROW(GameState::new_hand(c, {10, 10}, 0, 1), InvalidInput);
  EXPECT_THROW(GameState::new_hand(table(2), {10, 10, 10}, 0, 1), InvalidInput);
  EXPECT_THROW(GameState::new_hand(table(11), std::vector<Chips>(11, 10), 0, 1), InvalidInput);
}

TEST(Engine, ThreeWayAllInSidePots) {
  // Short stack holds aces, middle kings, deep queens.
  std::vector<std::optional<HoleCards>> holes = {HoleCards::parse("AsAh"), HoleCards::parse("KsKh"),
                                                 HoleCards::parse("QsQh")};
  auto g = GameState::new_hand_with_cards(table(3), {3, 7, 12}, 0, holes,
                                          parse_cards("2c7d9hJc3d"));
  EXPECT_EQ(g.to_act(), 0);
  g.apply(ActionType::kRaise);  // short all-in for 3
  EXPECT_TRUE(g.all_in(0));
  EXPECT_EQ(g.raises_this_round(), 2);
  while (!g.is_complete()) {
    auto legal = g.legal_actions();
    g.apply(legal.raise ? ActionType::kRaise : ActionType::kCall);
  }
  const auto& r = g.result();
  EXPECT_TRUE(r.went_to_showdown);
  EXPECT_EQ(r.net, (std::vector<Chips>{6, 1, -7}));
  ASSERT_EQ(r.pots.size(), 2u);
  EXPECT_EQ(r.pots[0].amount, 9);
  EXPECT_EQ(r.pots[0].winners, std::vector<int>{0});
  EXPECT_EQ(r.pots[1].amount, 8);
  EXPECT_EQ(r.pots[1].winners, std::vector<int>{1});
}

TEST(Engine, SplitPotOddChipGoesLeftOfButton) {
  std::vector<std::optional<HoleCards>> holes = {HoleCards::parse("2c3d"), HoleCards::parse("2d3c"),
                                                 HoleCards::parse("4c5d")};
  // A royal flush on the board: every live hand ties.
  auto g = GameState::new_hand_with_cards(table(3), {50, 50, 50}, 2, holes,
                                          parse_cards("AhKhQhJhTh"));
  // Button 2: SB seat 0 posts 1, BB seat 1 posts 2, seat 2 acts first.
  g.apply(ActionType::kRaise);  // seat 2 to 4
  g.apply(ActionType::kCall);   // seat 0
  g.apply(ActionType::kCall);   // seat 1
  while (!g.is_complete()) g.apply(ActionType::kCall);
  // Royal on board: three-way chop of 12, no odd chip.
  EXPECT_EQ(g.result().net, (std::vector<Chips>{0, 0, 0}));

  auto h = GameState::new_hand_with_cards(table(3), {50, 50, 50}, 2, holes,
                                          parse_cards("AhKhQhJhTh"));
  h.apply(ActionType::kCall);  // seat 2 limps 2
  h.apply(ActionType::kFold);  // seat 0 gives up the small blind
  while (!h.is_complete()) h.apply(ActionType::kCall);
  // 5 chips between seats 1 and 2; seat 1 is first left of the button.
  EXPECT_EQ(h.result().net, (std::vector<Chips>{-1, 1, 0}));
}

TEST(Engine, ReplayReproducesHand) {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    int seats = 2 + static_cast<int>(rng.below(9));
    std::vector<Chips> stacks(static_cast<std::size_t>(seats));
    for (auto& s : stacks) s = 1 + static_cast<Chips>(rng.below(60));
    int button = static_cast<int>(rng.below(static_cast<std::uint64_t>(seats)));
    auto g = GameState::new_hand(table(seats), stacks, button, trial, trial);
    std::vector<ActionType> actions;
    while (!g.is_complete()) {
      auto a = random_legal(g.legal_actions(), rng);
      actions.push_back(a);
      g.apply(a);
    }
    auto r = replay_hand(table(seats), stacks, button, trial, trial, actions);
    EXPECT_EQ(r.net, g.result().net);
    EXPECT_EQ(r.events, g.result().events);
    EXPECT_EQ(r.board, g.result().board);
  }
}

TEST(Engine, FunctionalApplyLeavesInputUntouched) {
  auto g = GameState::new_hand(table(2), {10, 10}, 0, 1);
  auto [next, events] = apply_action(g, ActionType::kRaise);
  EXPECT_EQ(g.events().size(), 0u);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].action, ActionType::kRaise);
  EXPECT_EQ(next.events().size(), 1u);
}

TEST(Engine, FuzzConservationTerminationAndSidePots) {
  Rng rng(2024);
  const int hands = 100000;
  std::map<bool, int> showdowns;
  for (int i = 0; i < hands; ++i) {
    int seats = 2 + static_cast<int>(rng.below(9));
    TableConfig c = table(seats);
    c.uncapped_heads_up = rng.chance(0.1);
    std::vector<Chips> stacks(static_cast<std::size_t>(seats));
    for (auto& s : stacks) s = rng.chance(0.1) ? 0 : 1 + static_cast<Chips>(rng.below(40));
    if (std::count_if(stacks.begin(), stacks.end(), [](Chips s) { return s > 0; }) < 2) {
      stacks[0] = stacks[1] = 30;
    }
    const Chips before = std::accumulate(stacks.begin(), stacks.end(), Chips{0});
    int button = static_cast<int>(rng.below(static_cast<std::uint64_t>(seats)));
    auto g = GameState::new_hand(c, stacks, button, rng(), i);
    int steps = 0;
    // Each round a seat acts at most once per raise plus once more.
    const int bound = c.uncapped_heads_up ? 2000 : 4 * seats * (c.max_raises_per_round + 1);
    while (!g.is_complete()) {
      auto legal = g.legal_actions();
      ASSERT_TRUE(legal.call);
      ASSERT_EQ(legal.fold, legal.to_call > 0);
      g.apply(random_legal(legal, rng));
      ASSERT_LE(++steps, bound);
    }
    const auto& r = g.result();
    ASSERT_EQ(std::accumulate(r.net.begin(), r.net.end(), Chips{0}), 0);
    ASSERT_EQ(std::accumulate(g.stacks().begin(), g.stacks().end(), Chips{0}), before);
    for (Chips s : g.stacks()) ASSERT_GE(s, 0);
    showdowns[r.went_to_showdown]++;
    if (!r.went_to_showdown) continue;
    // Reconstruct contributions: final stack = start - contributed + won.
    std::vector<Chips> paid(static_cast<std::size_t>(seats), 0);
    for (const auto& ev : r.events) paid[ev.seat] += ev.amount;
    paid[g.small_blind_seat()] += std::min(c.small_blind, stacks[g.small_blind_seat()]);
    paid[g.big_blind_seat()] += std::min(c.big_blind, stacks[g.big_blind_seat()]);
    auto expected = oracle_payout(g, paid);
    for (int s = 0; s < seats; ++s) {
      double won = static_cast<double>(r.net[s] + paid[s]);
      ASSERT_NEAR(won, expected[s], static_cast<double>(r.pots.size())) << "hand " << i;
    }
  }
  EXPECT_GT(showdowns[true], 1000);
  EXPECT_GT(showdowns[false], 1000);
}
