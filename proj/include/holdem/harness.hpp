#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "holdem/agents.hpp"
#include "holdem/logstats.hpp"

namespace holdem {

enum class MatchMode : std::uint8_t { kCash, kRing, kTournament, kEliminationSeries };

std::string_view mode_name(MatchMode mode);
MatchMode parse_mode(std::string_view text);

struct MatchConfig {
  /// Registry names, one per seat.
  std::vector<std::string> agents;
  MatchMode mode = MatchMode::kCash;
  /// Hands per match; per tournament in tournament modes.
  int hands = 1000;
  /// Tournaments in an elimination series.
  int tournaments = 10;
  /// table.seats is set from the roster size.
  TableConfig table;
  Chips starting_stack = 200;
  std::uint64_t seed = 1;
  /// Shift the roster one seat every hand while the button stays on seat 0.
  bool rotate_seats = false;
  /// Replay each deal with the roster rotated through every seat.
  bool duplicate = false;
  /// Per-decision budget in milliseconds; 0 disables it.
  double decision_timeout_ms = 0.0;
  /// Keep every hand for XML logging.
  bool keep_log = false;
  int bootstrap_resamples = 2000;

  /// Throws InvalidInput on bad values.
  void validate() const;
  /// key = value lines; '#' starts a comment.
  static MatchConfig parse(std::string_view text);
  static MatchConfig load(const std::string& path);
  std::string to_text() const;
};

struct AgentReport {
  std::string name;
  long long hands = 0;
  Chips net = 0;
  /// net / hands / small_bet.
  double income_rate = 0.0;
  /// Tournament modes: hands survived before busting (all hands if never).
  long long survival = 0;
  bool busted = false;
  long long rebuys = 0;
  /// Decisions replaced by a forced fold or check after a timeout or error.
  long long forced_decisions = 0;
  /// Cumulative net sampled every `bankroll_every` hands.
  std::vector<Chips> bankroll;

  friend bool operator==(const AgentReport&, const AgentReport&) = default;
};

struct ConfidenceInterval {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool excludes_zero() const { return lo > 0.0 || hi < 0.0; }

  friend bool operator==(const ConfidenceInterval&, const ConfidenceInterval&) = default;
};

struct MatchReport {
  MatchMode mode = MatchMode::kCash;
  std::vector<AgentReport> agents;
  long long hands_played = 0;
  /// Duplicate mode: per block (one deal across every rotation), each
  /// agent's net in small bets.
  std::vector<std::vector<double>> blocks;
  /// Per agent: bootstrap CI of income rate (sb/hand) over duplicate blocks.
  std::vector<ConfidenceInterval> income_ci;
  GameLog log;
  int bankroll_every = 100;

  std::string to_csv() const;
  friend bool operator==(const MatchReport&, const MatchReport&) = default;
};

struct SeriesEntry {
  std::string kind;
  long long entries = 0;
  long long survivals = 0;
  double share() const { return entries == 0 ? 0.0 : static_cast<double>(survivals) / entries; }
};

struct SeriesReport {
  int tournaments = 0;
  std::vector<SeriesEntry> kinds;
  std::string to_csv() const;
};

/// Builds agents by name. The default resolves every built-in name.
using AgentFactory = std::function<std::unique_ptr<Agent>(const std::string& name)>;

MatchReport run_match(const MatchConfig& config, const AgentFactory& factory);
MatchReport run_match(const MatchConfig& config);
/// Independent matches in parallel; results in input order, independent of
/// the thread count.
std::vector<MatchReport> run_matches(const std::vector<MatchConfig>& configs);

SeriesReport run_elimination_series(const MatchConfig& config, const AgentFactory& factory);
SeriesReport run_elimination_series(const MatchConfig& config);

/// Percentile bootstrap of the mean.
ConfidenceInterval bootstrap_mean_ci(std::span<const double> samples, int resamples,
                                     double level, std::uint64_t seed);

struct SwitchPolicy {
  int window = 50;
  /// Loss in small bets over the window that triggers a switch.
  double threshold = 10.0;
};

/// True iff the net over the trailing `window` entries of the per-hand
/// results (small bets) is <= -threshold. Needs a full window.
bool check_switch(const SwitchPolicy& policy, std::span<const double> per_hand_sb);

/// Plays the current strategy until check_switch fires, then moves to the
/// next one in the list (wrapping around).
class SwitchingAgent : public Agent {
 public:
  SwitchingAgent(std::vector<std::unique_ptr<Agent>> strategies, SwitchPolicy policy);
  SwitchingAgent(const SwitchingAgent& other);
  std::string name() const override;
  void begin_hand(const PlayerView& view) override;
  AgentDecision decide(const PlayerView& view, Rng& rng) override;
  void observe(const Observation& obs) override;
  void end_hand(const PlayerView& view, const HandResult& result) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<SwitchingAgent>(*this); }

  std::size_t active() const { return active_; }
  int switches() const { return switches_; }

 private:
  std::vector<std::unique_ptr<Agent>> strategies_;
  SwitchPolicy policy_;
  std::size_t active_ = 0;
  int switches_ = 0;
  std::vector<double> window_;
};

}  // namespace holdem
