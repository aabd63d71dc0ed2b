#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "holdem/agents.hpp"
#include "holdem/registry.hpp"

using namespace holdem;

namespace {

TableConfig table(int seats) {
  TableConfig c;
  c.seats = seats;
  return c;
}

// Plays `hands` hands with one agent per seat, asserting every decision is
// legal. Returns the per-seat event counts of the first preflop decision.
struct Tally {
  std::vector<long long> hands;
  std::vector<long long> vpip;
  std::vector<long long> raises;
};

Tally play(std::vector<std::unique_ptr<Agent>>& agents, int hands, std::uint64_t seed) {
  const int n = static_cast<int>(agents.size());
  const TableConfig t = table(n);
  Tally out{std::vector<long long>(n), std::vector<long long>(n), std::vector<long long>(n)};
  std::vector<Rng> rngs;
  for (int i = 0; i < n; ++i) rngs.emplace_back(derive_seed(seed, {9, static_cast<std::uint64_t>(i)}));
  for (int h = 0; h < hands; ++h) {
    GameState g = GameState::new_hand(t, std::vector<Chips>(n, 200), h % n, derive_seed(seed, {1, static_cast<std::uint64_t>(h)}),
                                      static_cast<std::uint64_t>(h));
    for (int s = 0; s < n; ++s) agents[s]->begin_hand(g.view(s));
    std::vector<bool> put_in(n, false);
    while (!g.is_complete()) {
      const int seat = g.to_act();
      const PlayerView v = g.view(seat);
      const AgentDecision d = agents[seat]->decide(v, rngs[seat]);
      EXPECT_TRUE(v.legal.contains(d.action)) << agents[seat]->name() << " chose " << action_name(d.action);
      Observation obs;
      obs.hand_id = g.hand_id();
      obs.player = seat;
      obs.board = g.board();
      obs.event = g.apply(d.action);
      if (obs.event.street == Street::kPreflop && obs.event.amount > 0) put_in[seat] = true;
      if (obs.event.action == ActionType::kRaise) ++out.raises[seat];
      for (int s = 0; s < n; ++s) agents[s]->observe(obs);
    }
    for (int s = 0; s < n; ++s) {
      agents[s]->end_hand(g.view(s), g.result());
      ++out.hands[s];
      out.vpip[s] += put_in[s];
    }
  }
  return out;
}

// First preflop decision, with the given hole cards for the seat to act.
PlayerView preflop_view(const std::string& hole, int seats) {
  const TableConfig t = table(seats);
  std::vector<std::optional<HoleCards>> holes(seats);
  GameState probe = GameState::new_hand(t, std::vector<Chips>(seats, 200), 0, 1);
  const int hero = probe.to_act();
  holes[hero] = HoleCards::parse(hole);
  GameState g = GameState::new_hand_with_cards(t, std::vector<Chips>(seats, 200), 0, holes, {});
  return g.view(g.to_act());
}

}  // namespace

TEST(Agents, EveryRegisteredAgentPlaysLegally) {
  for (int seats : {2, 6, 10}) {
    std::vector<std::unique_ptr<Agent>> agents;
    auto names = builtin_agent_names();
    // Learners are heads-up only.
    if (seats > 2) std::erase_if(names, [](const std::string& n) { return n.starts_with("learner:"); });
    for (int s = 0; s < seats; ++s) agents.push_back(make_agent(names[static_cast<std::size_t>(s * 3 + seats) % names.size()]));
    play(agents, seats == 10 ? 150 : 300, static_cast<std::uint64_t>(seats));
  }
}

TEST(Agents, RegistryRejectsUnknownNames) {
  EXPECT_THROW(make_agent("archetype:shark"), InvalidInput);
  EXPECT_THROW(make_agent("nobody"), InvalidInput);
  EXPECT_EQ(make_agent("hubot:nomodel")->name(), "hubot:nomodel");
  EXPECT_EQ(make_agent("archetype:calling_station")->name(), "archetype:calling_station");
}

TEST(Agents, LegalizeFallsBack) {
  LegalActions l;
  l.fold = false;
  l.call = true;
  l.raise = false;
  l.to_call = 0;
  EXPECT_EQ(legalize(ActionType::kFold, l), ActionType::kCall);
  EXPECT_EQ(legalize(ActionType::kRaise, l), ActionType::kCall);
  l.fold = true;
  l.to_call = 2;
  EXPECT_EQ(legalize(ActionType::kFold, l), ActionType::kFold);
}

TEST(Agents, RockFoldsSevenDeuceFacingTheBlind) {
  ArchetypeAgent rock(Archetype::kRock);
  Rng rng(3);
  for (int seats : {2, 6, 10}) {
    const PlayerView v = preflop_view("7c2d", seats);
    ASSERT_GT(v.legal.to_call, 0);
    EXPECT_EQ(rock.decide(v, rng).action, ActionType::kFold) << seats;
  }
}

TEST(Agents, ArchetypeQuadrants) {
  std::map<OpponentType, int> count;
  for (const auto& spec : archetype_table()) ++count[spec.quadrant];
  for (auto t : {OpponentType::kTightAggressive, OpponentType::kTightPassive, OpponentType::kLooseAggressive,
                 OpponentType::kLoosePassive}) {
    EXPECT_EQ(count[t], 2);
  }
}

TEST(Agents, ArchetypeStylesShowInPlay) {
  std::vector<std::unique_ptr<Agent>> agents;
  for (const auto& spec : archetype_table()) agents.push_back(std::make_unique<ArchetypeAgent>(spec.kind));
  const Tally t = play(agents, 3000, 11);
  auto vpip = [&](Archetype a) {
    const auto i = static_cast<std::size_t>(a);
    return static_cast<double>(t.vpip[i]) / static_cast<double>(t.hands[i]);
  };
  EXPECT_EQ(t.raises[static_cast<std::size_t>(Archetype::kCallingStation)], 0);
  EXPECT_GT(vpip(Archetype::kManiac), vpip(Archetype::kGambler));
  EXPECT_GT(vpip(Archetype::kGambler), vpip(Archetype::kRock));
  EXPECT_GT(vpip(Archetype::kCallingStation), vpip(Archetype::kFox));
  EXPECT_GT(vpip(Archetype::kFish), vpip(Archetype::kWeakTight));
  EXPECT_LT(vpip(Archetype::kRock), 0.3);
}

TEST(Agents, RandomIsUniformOverLegalActions) {
  RandomAgent agent;
  Rng rng(5);
  const PlayerView v = preflop_view("Ah2c", 6);
  ASSERT_EQ(v.legal.list().size(), 3u);
  std::array<int, 3> counts{};
  const int n = 30000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(agent.decide(v, rng).action)];
  double chi2 = 0;
  for (int c : counts) chi2 += std::pow(c - n / 3.0, 2) / (n / 3.0);
  EXPECT_LT(chi2, 13.8);  // chi-square, 2 dof, p = 0.001
}

TEST(Agents, StaticTightPlaysFewHands) {
  std::vector<std::unique_ptr<Agent>> agents;
  agents.push_back(std::make_unique<StaticTightAgent>());
  for (int i = 0; i < 5; ++i) agents.push_back(std::make_unique<AlwaysCallAgent>());
  const Tally t = play(agents, 2000, 13);
  EXPECT_LT(static_cast<double>(t.vpip[0]) / static_cast<double>(t.hands[0]), 0.15);
}

TEST(Agents, ObserverMatchesEhsAgentWhileRangesAreUniform) {
  // Before the warm-up the inferred ranges are uniform, so both agents run the
  // same computation with the same random stream.
  ObserverAgent observer;
  EhsThresholdAgent ehs;
  const TableConfig t = table(3);
  for (int h = 0; h < 15; ++h) {
    GameState g = GameState::new_hand(t, {200, 200, 200}, h % 3, 100 + static_cast<std::uint64_t>(h),
                                      static_cast<std::uint64_t>(h));
    observer.begin_hand(g.view(0));
    while (!g.is_complete()) {
      const PlayerView v = g.view(g.to_act());
      ActionType a = ActionType::kCall;
      if (v.hero == 0) {
        Rng r1(static_cast<std::uint64_t>(h)), r2(static_cast<std::uint64_t>(h));
        for (const auto& range : observer.opponent_ranges(v)) ASSERT_EQ(range, WeightTable::uniform());
        a = observer.decide(v, r1).action;
        EXPECT_EQ(a, ehs.decide(v, r2).action);
      }
      Observation obs;
      obs.hand_id = g.hand_id();
      obs.player = g.to_act();
      obs.board = g.board();
      obs.event = g.apply(a);
      observer.observe(obs);
    }
  }
}

TEST(Agents, ObserverNarrowsRangesAfterWarmup) {
  std::vector<std::unique_ptr<Agent>> agents;
  agents.push_back(std::make_unique<ObserverAgent>());
  agents.push_back(std::make_unique<ArchetypeAgent>(Archetype::kRock));
  play(agents, 200, 17);
  auto& observer = static_cast<ObserverAgent&>(*agents[0]);
  const OpponentProfile* rock = observer.profiles().find(1);
  ASSERT_NE(rock, nullptr);
  EXPECT_EQ(classify(*rock, ModelingConfig{}), OpponentType::kTightPassive);
  const PlayerView v = preflop_view("AhKh", 2);
  const auto ranges = observer.opponent_ranges(v);
  ASSERT_EQ(ranges.size(), 1u);
  EXPECT_NE(ranges[0], WeightTable::uniform());
}

TEST(Agents, HuBotPreflopThresholds) {
  HuBotConfig c;
  EXPECT_EQ(hubot_preflop_plan(-0.01, c), PreflopPlan::kFold);
  EXPECT_EQ(hubot_preflop_plan(0.0, c), PreflopPlan::kCall);
  EXPECT_EQ(hubot_preflop_plan(0.0999, c), PreflopPlan::kCall);
  EXPECT_EQ(hubot_preflop_plan(0.1, c), PreflopPlan::kRaiseForValue);
  EXPECT_EQ(hubot_preflop_plan(0.45, c), PreflopPlan::kCapRaises);

  IncomeRateTable table;
  table.players = 6;
  for (auto& e : table.ev) e = -1.0;
  table.ev[canonical_class(HoleCards::parse("AsAh")).id()] = 2.0;
  table.ev[canonical_class(HoleCards::parse("9s9h")).id()] = 0.2;
  table.ev[canonical_class(HoleCards::parse("5s5h")).id()] = 0.05;
  EXPECT_EQ(hubot_preflop_decide(preflop_view("AcAd", 6), table, c).action, ActionType::kRaise);
  EXPECT_EQ(hubot_preflop_decide(preflop_view("9c9d", 6), table, c).action, ActionType::kRaise);
  EXPECT_EQ(hubot_preflop_decide(preflop_view("5c5d", 6), table, c).action, ActionType::kCall);
  EXPECT_EQ(hubot_preflop_decide(preflop_view("7c2d", 6), table, c).action, ActionType::kFold);
  EXPECT_THROW(hubot_preflop_decide(preflop_view("7c2d", 4), table, c), InvalidInput);
}

TEST(Agents, HuBotReweightsOnlyWhenEnabled) {
  for (bool on : {true, false}) {
    std::vector<std::unique_ptr<Agent>> agents;
    HuBotConfig c;
    c.reweighting = on;
    agents.push_back(std::make_unique<HuBotAgent>(c));
    agents.push_back(std::make_unique<ArchetypeAgent>(Archetype::kManiac));
    const TableConfig t = table(2);
    GameState g = GameState::new_hand(t, {200, 200}, 0, 21);
    auto& hubot = static_cast<HuBotAgent&>(*agents[0]);
    hubot.begin_hand(g.view(0));
    Rng rng(1);
    // The maniac raises first in; the hero's reaction does not matter.
    while (!g.is_complete() && g.street() == Street::kPreflop) {
      const int seat = g.to_act();
      const auto d = agents[seat]->decide(g.view(seat), rng);
      Observation obs;
      obs.player = seat;
      obs.board = g.board();
      obs.event = g.apply(seat == 0 ? legalize(ActionType::kCall, g.legal_actions()) : d.action);
      hubot.observe(obs);
    }
    WeightTable expected = WeightTable::uniform();
    expected.remove_dead(g.hole(0)->mask());
    if (on) {
      EXPECT_NE(hubot.weights_for(1), expected);
    } else {
      EXPECT_EQ(hubot.weights_for(1), expected);
    }
  }
}

TEST(Agents, CloneKeepsLearnedState) {
  std::vector<std::unique_ptr<Agent>> agents;
  agents.push_back(std::make_unique<ObserverAgent>());
  agents.push_back(std::make_unique<ArchetypeAgent>(Archetype::kFish));
  play(agents, 50, 23);
  auto copy = agents[0]->clone();
  const auto& a = static_cast<ObserverAgent&>(*agents[0]).profiles();
  const auto& b = static_cast<ObserverAgent&>(*copy).profiles();
  ASSERT_NE(b.find(1), nullptr);
  EXPECT_EQ(a.find(1)->hands_observed(), b.find(1)->hands_observed());
}
