#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "holdem/pokerlang.hpp"
#include "holdem/registry.hpp"
#include "pokerlang_support.hpp"

using namespace holdem;
using namespace holdem::pokerlang;
using namespace holdem::pokerlang::test_support;

namespace {

PlayerView view_for(const GameState& g) { return g.view(g.to_act()); }

Inputs full_inputs() {
  Inputs in;
  in.number_of_players = 4;
  in.stack_bb = 50;
  in.pot_odds = 0.25;
  in.hs = 0.5;
  in.ehs = 0.55;
  in.ppot = 0.1;
  in.position_band = 2;
  in.opponent_hand = 0.7;
  in.opponents_in_game = 3;
  in.steal_bet = false;
  in.image = 1;
  return in;
}

int rule_count(const TacticDef& d) {
  int n = 0;
  for (const auto& b : d.behaviours) n += static_cast<int>(b.rules.size());
  return n;
}

}  // namespace

TEST(PokerLang, MinimalProgram) {
  const Program p = parse("strategy { when pot_odds in [0.0,0.2] use tight_aggressive }");
  ASSERT_EQ(p.strategy.size(), 1u);
  EXPECT_EQ(p.strategy[0].tactic.form, TacticRef::Form::kPredefined);
  EXPECT_EQ(p.strategy[0].tactic.predefined, Predefined::kTightAggressive);
  ASSERT_EQ(p.strategy[0].conditions.size(), 1u);
  EXPECT_EQ(p.strategy[0].conditions[0].op, Op::kInterval);
  EXPECT_EQ(parse(format(p)), p);
}

TEST(PokerLang, PredefinedTacticToken) {
  const Program p = parse("strategy { always use loose_passive }");
  EXPECT_EQ(p.strategy[0].tactic.predefined, Predefined::kLoosePassive);
  EXPECT_EQ(predefined_archetype(Predefined::kLoosePassive), Archetype::kFish);
  EXPECT_EQ(archetype_spec(predefined_archetype(Predefined::kTightAggressive)).quadrant, OpponentType::kTightAggressive);
  EXPECT_EQ(archetype_spec(predefined_archetype(Predefined::kTightPassive)).quadrant, OpponentType::kTightPassive);
  EXPECT_EQ(archetype_spec(predefined_archetype(Predefined::kLooseAggressive)).quadrant, OpponentType::kLooseAggressive);
}

TEST(PokerLang, UnknownEvaluatorNamesTheLegalOnes) {
  try {
    parse("strategy {\n  when bogus_eval > 3 use rock\n}");
    FAIL();
  } catch (const ParseError& e) {
    const Diagnostic& d = e.diagnostics().at(0);
    EXPECT_EQ(d.pos.line, 2);
    EXPECT_EQ(d.pos.column, 8);
    for (const char* kw : {"number_of_players", "stack", "pot_odds", "hand_region", "position_at_table"}) {
      EXPECT_NE(d.message.find(kw), std::string::npos) << kw;
    }
    EXPECT_EQ(d.message.find("implied_odds"), std::string::npos);
    EXPECT_EQ(d.str("x.pkl").rfind("x.pkl:2:8: ", 0), 0u);
  }
}

TEST(PokerLang, PredictorsAreRejectedInActivationConditions) {
  try {
    parse("strategy { when steal_bet == true use loose_aggressive }");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.diagnostics()[0].pos.column, 17);
    EXPECT_NE(e.diagnostics()[0].message.find("not allowed"), std::string::npos);
  }
}

TEST(PokerLang, CorpusCoversEveryProduction) {
  std::set<Term> terms;
  std::set<ActionKind> actions;
  std::set<Predefined> predefined;
  std::set<Op> ops;
  std::set<TacticRef::Form> forms;
  bool always = false, when = false, multi_behaviour = false, remainder = false;
  const auto files = corpus_files();
  ASSERT_GE(files.size(), 5u);
  for (const auto& f : files) {
    const Program p = parse_file(f);
    auto tactic = [&](const TacticDef& d) {
      multi_behaviour |= d.behaviours.size() > 1;
      for (const auto& b : d.behaviours)
        for (const auto& r : b.rules) {
          double sum = 0;
          for (const auto& c : r.conditions) {
            terms.insert(c.term);
            ops.insert(c.op);
          }
          for (const auto& a : r.actions) {
            actions.insert(a.kind);
            sum += a.percent;
          }
          remainder |= sum < 100;
        }
    };
    for (const auto& e : p.strategy) {
      (e.conditions.empty() ? always : when) = true;
      for (const auto& c : e.conditions) {
        terms.insert(c.term);
        ops.insert(c.op);
      }
      forms.insert(e.tactic.form);
      if (e.tactic.form == TacticRef::Form::kPredefined) predefined.insert(e.tactic.predefined);
      if (e.tactic.form == TacticRef::Form::kInline) tactic(*e.tactic.definition);
    }
    for (const auto& d : p.tactics) tactic(d);
  }
  EXPECT_EQ(terms.size(), static_cast<std::size_t>(kNumTerms));
  EXPECT_EQ(actions.size(), static_cast<std::size_t>(kNumActionKinds));
  EXPECT_EQ(predefined.size(), 4u);
  EXPECT_EQ(ops.size(), 7u);
  EXPECT_EQ(forms.size(), 3u);
  EXPECT_TRUE(always && when && multi_behaviour && remainder);
}

TEST(PokerLang, CorpusRoundTripsAndValidatesClean) {
  for (const auto& f : corpus_files()) {
    const Program p = parse_file(f);
    const std::string text = format(p);
    EXPECT_EQ(parse(text), p) << f;
    EXPECT_EQ(format(parse(text)), text) << f;
    EXPECT_TRUE(validate(p).empty()) << f << ": " << validate(p)[0].message;
  }
}

TEST(PokerLang, RandomProgramsRoundTrip) {
  Generator gen(2024);
  for (int i = 0; i < 1000; ++i) {
    const Program p = gen.program(6);
    const std::string text = format(p);
    Program back;
    ASSERT_NO_THROW(back = parse(text)) << text;
    ASSERT_EQ(back, p) << text;
    ASSERT_EQ(format(back), text);
  }
}

TEST(PokerLang, FiftyRuleStrategyRoundTrips) {
  Generator gen(7);
  Program p;
  TacticDef big = gen.tactic(1);
  big.behaviours.clear();
  Behaviour b;
  for (int i = 0; i < 50; ++i) {
    Rule r;
    r.conditions.push_back(gen.condition(true));
    r.actions.push_back({ActionKind::kRaise, 50, {}});
    r.actions.push_back({ActionKind::kCall, 50, {}});
    b.rules.push_back(r);
  }
  big.behaviours.push_back(b);
  p.tactics.push_back(big);
  Entry e;
  e.tactic.form = TacticRef::Form::kNamed;
  e.tactic.name = big.name;
  p.strategy.push_back(e);
  EXPECT_EQ(rule_count(big), 50);
  EXPECT_EQ(parse(format(p)), p);
}

TEST(PokerLang, CorpusMutationsFailWithPositions) {
  int mutations = 0;
  for (const auto& f : corpus_files()) {
    const std::string text = slurp(f);
    for (std::size_t i = 0; i < text.size(); ++i) {
      const bool word_start = std::isalpha(static_cast<unsigned char>(text[i])) &&
                              (i == 0 || !(std::isalnum(static_cast<unsigned char>(text[i - 1])) || text[i - 1] == '_'));
      if (!word_start) continue;
      const auto line_start = text.rfind('\n', i) == std::string::npos ? 0 : text.rfind('\n', i) + 1;
      if (text.find('#', line_start) < i) continue;  // inside a comment
      // Splice an illegal character into the word.
      std::string bad = text;
      bad.insert(i + 1, "@");
      try {
        parse(bad);
        ADD_FAILURE() << f << " accepted a mutation at offset " << i;
      } catch (const ParseError& e) {
        const auto& d = e.diagnostics().at(0);
        EXPECT_GE(d.pos.line, 1);
        EXPECT_GE(d.pos.column, 1);
      }
      // Replace the whole word with an unknown one.
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      // Renaming an inline definition keeps the program valid.
      if (i >= 7 && text.compare(i - 7, 7, "tactic ") == 0 && text.find('{', j) < text.find('\n', j)) {
        ++mutations;
        continue;
      }
      bad = text.substr(0, i) + "zzbogus" + text.substr(j);
      try {
        parse(bad);
        ADD_FAILURE() << f << " accepted 'zzbogus' at offset " << i;
      } catch (const ParseError& e) {
        EXPECT_GE(e.diagnostics().at(0).pos.line, 1);
      }
      ++mutations;
    }
  }
  EXPECT_GT(mutations, 100);
}

TEST(PokerLang, SyntaxDiagnostics) {
  struct Case {
    std::string text;
    int line, column;
    std::string fragment;
  };
  const std::vector<Case> cases = {
      {"strategy { }", 1, 12, "at least one entry"},
      {"tactic x { behaviour 1 { } }", 1, 29, "missing strategy"},
      {"strategy { always use x }", 1, 12, "undefined tactic 'x'"},
      {"strategy { always use tactic a { } }\ntactic a { }", 2, 1, "duplicate tactic name 'a'"},
      {"strategy { always use tactic t { behaviour 0 { } } }", 1, 44, "positive"},
      {"strategy { always use tactic t { behaviour 1 { rule { do raise 120% } } } }", 1, 64, "(0, 100]"},
      {"strategy { always use tactic t { behaviour 1 { rule { do jump 10% } } } }", 1, 58, "expected an action"},
      {"strategy { when pot_odds in [0.5, 0.1] use rock }", 1, 17, "out of order"},
      {"strategy { when hand_region == huge use rock }", 1, 32, "trash, weak, medium, strong, monster"},
      {"strategy { when stack == deep use rock }", 1, 26, "a number"},
      {"strategy { when stack ! 3 use rock }", 1, 23, "unexpected character '!'"},
      {"strategy {\n  always use rock\n", 3, 1, "end of input"},
      {"strategy { always use tight_passive } strategy { always use tight_passive }", 1, 39, "exactly one"},
  };
  for (const auto& c : cases) {
    try {
      parse(c.text);
      ADD_FAILURE() << "accepted: " << c.text;
    } catch (const ParseError& e) {
      const auto& d = e.diagnostics().at(0);
      EXPECT_EQ(d.pos.line, c.line) << c.text << " -> " << d.message;
      EXPECT_EQ(d.pos.column, c.column) << c.text << " -> " << d.message;
      EXPECT_NE(d.message.find(c.fragment), std::string::npos) << d.message;
    }
  }
}

TEST(PokerLang, Validation) {
  const Program over = parse("strategy { always use tactic t {\n behaviour 1 {\n  rule { do raise 70% call 50% }\n } } }");
  auto d = validate(over);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].pos.line, 3);
  EXPECT_NE(d[0].message.find("120"), std::string::npos);

  const Program unreachable = parse("strategy {\n always use tight_passive\n when stack > 3 use loose_passive\n}");
  d = validate(unreachable);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].pos.line, 3);
  EXPECT_NE(d[0].message.find("unreachable"), std::string::npos);

  const Program empty = parse("strategy { always use tactic t { behaviour 1 { } } }");
  d = validate(empty);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NE(d[0].message.find("no rules"), std::string::npos);

  EXPECT_TRUE(validate(parse("strategy { when stack > 3 use tight_passive always use rock_solid }\n"
                             "tactic rock_solid { behaviour 1 { rule { do fold 100% } } }"))
                  .empty());
}

TEST(PokerLang, ConditionsEvaluate) {
  const Inputs in = full_inputs();
  auto check = [&](const std::string& cond) {
    const Program p = parse("strategy { when " + cond + " use tight_passive }");
    return holds_all(p.strategy[0].conditions, in);
  };
  EXPECT_TRUE(check("number_of_players == 4"));
  EXPECT_TRUE(check("number_of_players in {2, 4}"));
  EXPECT_FALSE(check("number_of_players in {2, 3}"));
  EXPECT_TRUE(check("stack in [50, 60]"));
  EXPECT_FALSE(check("stack < 50"));
  EXPECT_TRUE(check("pot_odds <= 0.25 pot_odds >= 0.25"));
  EXPECT_TRUE(check("hand_region == medium"));
  EXPECT_TRUE(check("hand_region in [weak, strong]"));
  EXPECT_FALSE(check("hand_region > medium"));
  EXPECT_TRUE(check("position_at_table == late"));
  EXPECT_EQ(hand_region(0.19), 0);
  EXPECT_EQ(hand_region(0.2), 1);
  EXPECT_EQ(hand_region(0.8), 4);
  EXPECT_EQ(image_bucket(0.5), 0);
  EXPECT_EQ(image_bucket(1.0), 1);
  EXPECT_EQ(image_bucket(2.0), 2);

  const Program rules = parse(
      "strategy { always use t }\ntactic t { behaviour 1 { rule { implied_odds in [0.225, 0.225] "
      "opponent_hand > 0.6 opponent_in_game == 3 steal_bet == false image_at_table == neutral do raise 100% } } }");
  Rng rng(1);
  EXPECT_EQ(sample_action(rules.tactics[0], in, rng), ActionKind::kRaise);
}

TEST(PokerLang, MissingInputNamesTheEvaluator) {
  const Program p = parse("strategy { when hand_region == strong use tight_passive }");
  Inputs in = full_inputs();
  in.ehs.reset();
  try {
    select_entry(p, in);
    FAIL();
  } catch (const EvaluationError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("hand_region", 0), 0u) << e.what();
  }
}

TEST(PokerLang, DegenerateAndMixedSampling) {
  const Program one = parse("strategy { always use tactic t { behaviour 1 { rule { do raise 100% } } } }");
  Rng rng(99);
  const TacticDef& t = *one.strategy[0].tactic.definition;
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_action(t, full_inputs(), rng), ActionKind::kRaise);

  const Program mixed = parse_file(kCorpus + "/remainder.pkl");
  const TacticDef& m = *mixed.strategy[0].tactic.definition;
  int raise = 0, call = 0, rest = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto a = sample_action(m, full_inputs(), rng);
    if (!a) ++rest;
    else if (*a == ActionKind::kRaise) ++raise;
    else if (*a == ActionKind::kCall) ++call;
  }
  EXPECT_NEAR(raise / double(n), 0.4, 0.02);
  EXPECT_NEAR(call / double(n), 0.4, 0.02);
  EXPECT_NEAR(rest / double(n), 0.2, 0.02);
}

TEST(PokerLang, BehaviourValuesWeightRuleChoice) {
  const Program p = parse(
      "strategy { always use t }\n"
      "tactic t { behaviour 3 { rule { do raise 100% } } behaviour 1 { rule { do call 100% } } "
      "behaviour 5 { rule { stack > 1000 do fold 100% } } }");
  Rng rng(4);
  int raises = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) raises += sample_action(p.tactics[0], full_inputs(), rng) == ActionKind::kRaise;
  EXPECT_NEAR(raises / double(n), 0.75, 0.015);
}

TEST(PokerLang, CheckRaiseTrapChecksThenRaises) {
  TableConfig t;
  t.seats = 3;
  GameState g = GameState::new_hand(t, {200, 200, 200}, 0, 5, 1);
  while (g.street() == Street::kPreflop) g.apply(ActionType::kCall);
  // Flop: seat 1 acts first; it runs the trap, seat 2 bets, seat 0 calls.
  ASSERT_EQ(g.to_act(), 1);
  MacroPlan plan(ActionKind::kCheckRaiseTrap, g.hand_id(), g.street());
  const Inputs in = full_inputs();
  EXPECT_EQ(plan.next(view_for(g), in), ActionType::kCall);
  g.apply(ActionType::kCall);
  g.apply(ActionType::kRaise);
  g.apply(ActionType::kCall);
  ASSERT_EQ(g.to_act(), 1);
  ASSERT_TRUE(plan.active_for(view_for(g)));
  EXPECT_EQ(plan.next(view_for(g), in), ActionType::kRaise);
  g.apply(ActionType::kRaise);
  g.apply(ActionType::kRaise);  // seat 2 re-raises
  g.apply(ActionType::kCall);
  EXPECT_EQ(plan.next(view_for(g), in), ActionType::kCall);

  MacroPlan bluff(ActionKind::kCheckRaiseBluff, 0, Street::kFlop);
  PlayerView v = view_for(g);
  v.hand_id = 0;
  v.street = Street::kFlop;
  v.legal.to_call = 4;
  v.legal.fold = true;
  EXPECT_EQ(bluff.next(v, in), ActionType::kRaise);
  EXPECT_EQ(bluff.next(v, in), ActionType::kFold);
  EXPECT_FALSE(bluff.active_for(view_for(GameState::new_hand(t, {200, 200, 200}, 0, 5, 2))));
}

TEST(PokerLang, SemiBluffNeedsADraw) {
  PlayerView v;
  v.legal.call = true;
  v.legal.raise = true;
  v.legal.to_call = 0;
  Inputs in;
  in.hs = 0.3;
  in.ppot = 0.25;
  MacroPlan draw(ActionKind::kSemiBluff, 0, Street::kPreflop);
  EXPECT_EQ(draw.next(v, in), ActionType::kRaise);
  in.ppot = 0.1;
  MacroPlan none(ActionKind::kSemiBluff, 0, Street::kPreflop);
  EXPECT_EQ(none.next(v, in), ActionType::kCall);  // free check
  EXPECT_THROW(MacroPlan(ActionKind::kRaise, 0, Street::kFlop), InvalidInput);
}

TEST(PokerLang, AgentsNeverActIllegallyAndAreDeterministic) {
  for (const auto& f : corpus_files()) {
    for (int seats : {2, 6}) {
      std::vector<std::unique_ptr<Agent>> agents;
      for (int s = 0; s < seats; ++s) {
        agents.push_back(s % 2 == 0 ? make_agent("pokerlang:" + f) : make_agent("archetype:gambler"));
      }
      auto run = [&](std::vector<std::unique_ptr<Agent>>& roster) {
        std::vector<ActionType> trace;
        const TableConfig t = [&] {
          TableConfig c;
          c.seats = seats;
          return c;
        }();
        Rng rng(11);
        for (int h = 0; h < 120; ++h) {
          GameState g = GameState::new_hand(t, std::vector<Chips>(seats, 200), h % seats, 1000 + h, h);
          for (int s = 0; s < seats; ++s) roster[s]->begin_hand(g.view(s));
          while (!g.is_complete()) {
            const PlayerView v = g.view(g.to_act());
            const ActionType a = roster[v.hero]->decide(v, rng).action;
            EXPECT_TRUE(v.legal.contains(a)) << f;
            Observation obs;
            obs.hand_id = g.hand_id();
            obs.player = v.hero;
            obs.board = g.board();
            obs.event = g.apply(a);
            trace.push_back(a);
            for (auto& r : roster) r->observe(obs);
          }
        }
        return trace;
      };
      std::vector<std::unique_ptr<Agent>> copy;
      for (const auto& a : agents) copy.push_back(a->clone());
      EXPECT_EQ(run(agents), run(copy)) << f;
    }
  }
}

TEST(PokerLang, RegistryReportsFileAndPosition) {
  const std::string path = ::testing::TempDir() + "/bad.pkl";
  std::ofstream(path) << "strategy {\n  when bogus > 1 use rock\n}\n";
  try {
    make_agent("pokerlang:" + path);
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_EQ(std::string(e.what()).rfind(path + ":2:8: ", 0), 0u) << e.what();
  }
  EXPECT_THROW(make_agent("pokerlang:/nonexistent.pkl"), InvalidInput);
}

TEST(PokerLang, ShippedStrategiesAreClean) {
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(std::string(HOLDEM_SOURCE_DIR) + "/strategies")) {
    const Program p = parse_file(e.path().string());
    EXPECT_TRUE(validate(p).empty()) << e.path();
    EXPECT_EQ(parse(format(p)), p);
    ++n;
  }
  EXPECT_GE(n, 2);
}
