#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "holdem/harness.hpp"
#include "holdem/logstats.hpp"

using namespace holdem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kGolden = std::string(HOLDEM_SOURCE_DIR) + "/tests/data/golden_log.xml";

GameLog archetype_log(int seats, int hands, std::uint64_t seed, int first = 0) {
  MatchConfig c;
  const char* names[] = {"archetype:maniac", "archetype:rock", "archetype:fish", "archetype:fox",
                         "archetype:gambler", "archetype:ace", "archetype:weak_tight",
                         "archetype:calling_station"};
  for (int i = 0; i < seats; ++i) c.agents.emplace_back(names[(first + i) % 8]);
  c.hands = hands;
  c.seed = seed;
  c.keep_log = true;
  c.rotate_seats = true;
  return run_match(c).log;
}

// Replaces the first occurrence of `from` after `anchor`.
std::string replace_after(std::string text, const std::string& anchor, const std::string& from,
                          const std::string& to) {
  const auto a = text.find(anchor);
  const auto p = text.find(from, a);
  text.replace(p, from.size(), to);
  return text;
}

void expect_log_error(const std::string& xml, int line, const std::string& fragment) {
  try {
    read_log(xml);
    ADD_FAILURE() << "accepted: " << fragment;
  } catch (const LogError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_GT(e.column(), 0);
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(Logstats, GoldenFileReadsAndWritesByteForByte) {
  const std::string text = slurp(kGolden);
  ASSERT_FALSE(text.empty());
  const GameLog log = read_log(text);
  EXPECT_EQ(log.players.size(), 3u);
  EXPECT_EQ(log.hands.size(), 4u);
  EXPECT_EQ(log.seed, 2024u);
  EXPECT_EQ(log.hands[0].board.size(), 5u);
  EXPECT_EQ(write_log(log), text);
}

TEST(Logstats, GeneratedLogsRoundTrip) {
  for (int seats : {2, 6, 10}) {
    const GameLog log = archetype_log(seats, 150, static_cast<std::uint64_t>(seats));
    const GameLog back = read_log(write_log(log));
    EXPECT_EQ(back, log);
  }
}

TEST(Logstats, FileHelpers) {
  const GameLog log = read_log_file(kGolden);
  const std::string path = ::testing::TempDir() + "/roundtrip.xml";
  write_log_file(log, path);
  EXPECT_EQ(read_log_file(path), log);
  EXPECT_THROW(read_log_file("/nonexistent/log.xml"), InvalidInput);
}

TEST(Logstats, RejectsBrokenConservation) {
  const std::string text = slurp(kGolden);
  const std::string bad = replace_after(text, "<hand id=\"1\"", "net=\"15\"", "net=\"16\"");
  expect_log_error(bad, 31, "conservation");
}

TEST(Logstats, RejectsResultsThatDoNotReplay) {
  const std::string text = slurp(kGolden);
  std::string bad = replace_after(text, "<hand id=\"1\"", "net=\"15\"", "net=\"16\"");
  bad = replace_after(bad, "<hand id=\"1\"", "net=\"-1\"", "net=\"-2\"");
  expect_log_error(bad, 31, "settlement");
}

TEST(Logstats, UnknownShowdownCardsSkipOnlyTheSettlementCheck) {
  std::string swapped = replace_after(slurp(kGolden), "<hand id=\"0\"", "net=\"16\"", "net=\"-14\"");
  swapped = replace_after(swapped, "<result seat=\"1\"", "net=\"-14\"", "net=\"16\"");
  expect_log_error(swapped, 10, "settlement");
  const std::string unknown = replace_after(swapped, "<hand id=\"0\"", " hole=\"JsTd\"", "");
  EXPECT_NO_THROW(read_log(unknown));
  const std::string unbalanced = replace_after(unknown, "<hand id=\"0\"", "net=\"-2\"", "net=\"-3\"");
  expect_log_error(unbalanced, 10, "conservation");
}

TEST(Logstats, RejectsOutOfTurnAndIllegalActions) {
  const std::string text = slurp(kGolden);
  expect_log_error(replace_after(text, "<hand id=\"1\"", "<action seat=\"1\"", "<action seat=\"0\""), 35,
                   "out of turn");
  expect_log_error(replace_after(text, "<hand id=\"1\"", "type=\"fold\" amount=\"0\" to_call=\"1\"",
                                 "type=\"call\" amount=\"0\" to_call=\"1\""),
                   36, "do not match");
}

TEST(Logstats, SyntaxErrorsCarryPositions) {
  expect_log_error("<gamelog version=\"1\">\n  <table seats=\"2\"\n</gamelog>", 3, "");
  expect_log_error("<gamelog version=\"1\">\n <players></player>\n</gamelog>", 2, "mismatched");
  expect_log_error("<gamelog version=\"1\" version=\"1\"/>", 1, "duplicate attribute");
  expect_log_error("<gamelog version=\"2\"/>", 1, "version");
  expect_log_error("<log/>", 1, "gamelog");
  const std::string text = slurp(kGolden);
  expect_log_error(replace_after(text, "<hand id=\"0\"", "hole=\"9s9d\"", "hole=\"9s9x\""), 11, "hole");
  expect_log_error(replace_after(text, "<hand id=\"0\"", "street=\"preflop\"", "street=\"fifth\""), 14, "street");
  expect_log_error(replace_after(text, "<hand id=\"0\"", "<board ", "<bored "), 26, "unexpected element");
}

TEST(Logstats, ValidateHandChecksAgainstTheEngine) {
  const GameLog log = read_log_file(kGolden);
  for (const auto& h : log.hands) EXPECT_NO_THROW(validate_hand(log.table, h));
  HandRecord h = log.hands[0];
  h.events.pop_back();
  EXPECT_THROW(validate_hand(log.table, h), InvalidInput);
}

TEST(Logstats, ConverterRegistry) {
  ConverterRegistry registry;
  EXPECT_EQ(registry.formats(), std::vector<std::string>{"xml"});
  EXPECT_EQ(registry.get("xml").convert(slurp(kGolden)).hands.size(), 4u);
  EXPECT_THROW(registry.get("pokerstars"), InvalidInput);

  struct Empty : LogConverter {
    std::string format() const override { return "empty"; }
    GameLog convert(std::string_view) const override { return {}; }
  };
  registry.add(std::make_unique<Empty>());
  EXPECT_EQ(registry.formats().size(), 2u);
  EXPECT_TRUE(registry.get("empty").convert("").hands.empty());
}

TEST(Logstats, ExtractionRows) {
  const GameLog log = archetype_log(6, 120, 31);
  ExtractOptions opts;
  const Extraction ex = extract(log, opts);
  std::size_t events = 0;
  for (const auto& h : log.hands) events += h.events.size();
  ASSERT_EQ(ex.rows.size(), events);
  EXPECT_EQ(ex.players.size(), 6u);
  std::uint64_t last_hand = ~0ull;
  for (const auto& r : ex.rows) {
    EXPECT_GE(r.position_score, 0.0);
    EXPECT_LE(r.position_score, 1.0);
    ASSERT_TRUE(r.ehs.has_value());
    EXPECT_GE(*r.ehs, 0.0);
    EXPECT_LE(*r.ehs, 1.0);
    if (r.hand_id != last_hand) EXPECT_FALSE(r.last_type.has_value());
    else EXPECT_TRUE(r.last_type.has_value());
    const HandRecord& h = log.hands[r.hand_id];
    if (r.seat == h.button) EXPECT_DOUBLE_EQ(r.position_score, 1.0);
    last_hand = r.hand_id;
  }
  EXPECT_EQ(extract(log, opts).rows, ex.rows);
  const std::string csv = rows_to_csv(ex.rows);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), events + 1);
  EXPECT_EQ(player_list_csv(ex).rfind("player\n", 0), 0u);
  opts.compute_ehs = false;
  EXPECT_FALSE(extract(log, opts).rows[0].ehs.has_value());
}

TEST(Logstats, RatiosAndWald) {
  Ratio a{"a", 30, 100};
  EXPECT_DOUBLE_EQ(*a.value(), 0.3);
  auto [lo, hi] = a.wald();
  EXPECT_NEAR(lo, 0.3 - 1.96 * std::sqrt(0.21 / 100), 1e-12);
  EXPECT_NEAR(hi, 0.3 + 1.96 * std::sqrt(0.21 / 100), 1e-12);
  EXPECT_FALSE(Ratio{"empty"}.value().has_value());
  const RatioDifference d = compare_ratios(Ratio{"x", 60, 100}, Ratio{"y", 30, 100});
  EXPECT_NEAR(d.estimate, 0.3, 1e-12);
  EXPECT_TRUE(d.excludes_zero());
  EXPECT_FALSE(compare_ratios(Ratio{"x", 31, 100}, Ratio{"y", 30, 100}).excludes_zero());
}

TEST(Logstats, FactorCountsOnAFixedHand) {
  // Four seats, button 0: seat 3 opens the action, then 0, then the blinds.
  TableConfig t;
  t.seats = 4;
  GameState g = GameState::new_hand(t, {200, 200, 200, 200}, 0, 99, 0);
  for (ActionType a : {ActionType::kFold, ActionType::kRaise, ActionType::kFold, ActionType::kCall}) g.apply(a);
  while (!g.is_complete()) g.apply(ActionType::kCall);
  GameLog log;
  log.table = t;
  log.players = {"a", "b", "c", "d"};
  const std::vector<int> players = {0, 1, 2, 3};
  log.hands.push_back(make_record(g, players, std::nullopt));
  const FactorReport r = factor_analysis(std::span<const GameLog>(&log, 1));
  EXPECT_EQ(r.by_position[0].count, 1);  // seat 3 folded early
  EXPECT_EQ(r.by_position[0].total, 1);
  EXPECT_EQ(r.by_position[1].count, 0);
  EXPECT_EQ(r.by_position[1].total, 1);
  EXPECT_EQ(r.by_position[2].total, 0);
  EXPECT_EQ(r.by_players[2].count, 2);
  EXPECT_EQ(r.by_players[2].total, 4);
  // Seat 3 opened with a fold, so the three later seats count as not raised.
  EXPECT_EQ(r.by_first_raise[0].count, 1);
  EXPECT_EQ(r.by_first_raise[0].total, 3);
  EXPECT_EQ(r.by_first_raise[1].total, 0);
  EXPECT_EQ(r.by_facing_raise[0].count, 1);
  EXPECT_EQ(r.by_facing_raise[0].total, 2);
  EXPECT_EQ(r.by_facing_raise[1].count, 1);
  EXPECT_EQ(r.by_facing_raise[1].total, 2);
  long long stack_rows = 0;
  for (const auto& s : r.by_stack) {
    if (s.label.starts_with(">=50bb")) stack_rows += s.count;
    else EXPECT_EQ(s.total, 0);
  }
  EXPECT_EQ(stack_rows, 4);
  const std::string csv = r.to_csv();
  EXPECT_NE(csv.find("position,early,1,1,1"), std::string::npos) << csv;
  EXPECT_NE(csv.find("position,late,0,0,NA"), std::string::npos) << csv;
}

TEST(Logstats, FactorDirectionsOnArchetypeLogs) {
  // Heads-up logs pair up all eight archetypes so both tables see the same styles.
  std::vector<GameLog> logs = {archetype_log(10, 600, 41)};
  for (int first = 0; first < 8; first += 2) logs.push_back(archetype_log(2, 300, 42 + first, first));
  const FactorReport r = factor_analysis(logs);
  EXPECT_GT(*r.by_position[0].value(), *r.by_position[2].value());
  EXPECT_GT(*r.by_players[8].value(), *r.by_players[0].value());
  EXPECT_GT(*r.by_first_raise[1].value(), *r.by_first_raise[0].value());
}
