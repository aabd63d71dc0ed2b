#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "holdem/engine.hpp"
#include "holdem/modeling.hpp"

namespace holdem {

/// One hand as stored in a game log.
struct HandRecord {
  std::uint64_t hand_id = 0;
  /// Deck seed the hand was dealt from, when known.
  std::optional<std::uint64_t> seed;
  int button = 0;
  /// Player id per seat, -1 for an empty seat.
  std::vector<int> players;
  /// Stacks at the start of the hand.
  std::vector<Chips> stacks;
  /// Hole cards where known, per seat.
  std::vector<std::optional<HoleCards>> holes;
  /// Board cards revealed by the end of the hand.
  std::vector<Card> board;
  std::vector<ActionEvent> events;
  std::vector<Chips> net;

  friend bool operator==(const HandRecord&, const HandRecord&) = default;
};

struct GameLog {
  TableConfig table;
  std::optional<std::uint64_t> seed;
  std::string timestamp;
  /// Player names indexed by player id.
  std::vector<std::string> players;
  std::vector<HandRecord> hands;

  friend bool operator==(const GameLog&, const GameLog&) = default;
};

/// Builds the record for a finished hand.
HandRecord make_record(const GameState& finished, std::span<const int> players,
                       std::optional<std::uint64_t> seed);

/// Malformed document, schema violation, or a hand that does not replay.
class LogError : public InvalidInput {
 public:
  LogError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

std::string write_log(const GameLog& log);
/// Parses and validates: every hand must replay legally through the engine and
/// reproduce its recorded net chips, which must sum to zero.
GameLog read_log(std::string_view xml);
GameLog read_log_file(const std::string& path);
void write_log_file(const GameLog& log, const std::string& path);

/// Replays one record through the engine. Throws InvalidInput on mismatch.
void validate_hand(const TableConfig& table, const HandRecord& hand);

/// Converter plug-in: turns foreign hand histories into a GameLog.
class LogConverter {
 public:
  virtual ~LogConverter() = default;
  virtual std::string format() const = 0;
  virtual GameLog convert(std::string_view input) const = 0;
};

/// Registered converters; the native XML format is always present as "xml".
class ConverterRegistry {
 public:
  ConverterRegistry();
  void add(std::unique_ptr<LogConverter> converter);
  const LogConverter& get(std::string_view format) const;
  std::vector<std::string> formats() const;

 private:
  std::map<std::string, std::unique_ptr<LogConverter>, std::less<>> converters_;
};

struct GameStatsRow {
  std::uint64_t hand_id = 0;
  int seat = 0;
  Street street = Street::kPreflop;
  /// position_index / (players - 1): 0 for the first seat after the button, 1 for the button.
  double position_score = 0.0;
  std::optional<double> ehs;
  /// Four-type class of the previous actor, from that player's profile so far.
  std::optional<OpponentType> last_type;
  bool facing_raise = false;
  ActionType action = ActionType::kCall;

  friend bool operator==(const GameStatsRow&, const GameStatsRow&) = default;
};

struct Extraction {
  std::vector<std::string> players;
  std::vector<GameStatsRow> rows;
};

struct ExtractOptions {
  bool compute_ehs = true;
  std::uint64_t seed = 1;
  ModelingConfig modeling;
};

Extraction extract(const GameLog& log, const ExtractOptions& options = {});
std::string rows_to_csv(const std::vector<GameStatsRow>& rows);
std::string player_list_csv(const Extraction& extraction);

/// Successes over trials with a Wald interval.
struct Ratio {
  std::string label;
  long long count = 0;
  long long total = 0;
  /// nullopt when total is zero.
  std::optional<double> value() const;
  std::pair<double, double> wald(double z = 1.96) const;
};

/// Difference of two ratios with a Wald interval.
struct RatioDifference {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool excludes_zero() const { return lo > 0.0 || hi < 0.0; }
};
RatioDifference compare_ratios(const Ratio& a, const Ratio& b, double z = 1.96);

struct FactorReport {
  /// Fold ratios at each seat's first preflop decision.
  std::vector<Ratio> by_position;      // early, middle, late
  std::vector<Ratio> by_players;       // one per player count 2..10
  /// Later seats, split by whether the first seat to act preflop raised.
  std::vector<Ratio> by_first_raise;   // first-not-raised, first-raised
  std::vector<Ratio> by_facing_raise;  // unraised, facing any raise
  /// Action mix per stack bucket (in big bets): rows "<bucket>:<action>".
  std::vector<Ratio> by_stack;
  std::string to_csv() const;
};

FactorReport factor_analysis(std::span<const GameLog> logs);

}  // namespace holdem
