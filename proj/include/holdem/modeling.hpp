#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "holdem/engine.hpp"
#include "holdem/equity.hpp"
#include "holdem/range.hpp"

namespace holdem {

enum class OpponentType : std::uint8_t { kTightAggressive, kTightPassive, kLooseAggressive, kLoosePassive };
inline constexpr int kNumOpponentTypes = 4;

std::string_view type_name(OpponentType type);  // "TA", "TP", "LA", "LP"
OpponentType parse_type(std::string_view text);

struct ModelingConfig {
  double vpip_threshold = 0.28;
  double af_threshold = 1.0;
  int warmup_hands = 20;
  OpponentType prior_type = OpponentType::kTightPassive;
  double af_cap = 10.0;
  double ramp_width = 0.2;
  double ramp_floor = 0.01;
  /// Pseudo-counts spread evenly over the possible actions of a bucket.
  double frequency_prior = 1.0;
};

/// Fold/call/raise counts per (street, facing_raise) bucket.
class ActionFrequencyTable {
 public:
  void add(Street street, bool facing_raise, ActionType action);
  int count(Street street, bool facing_raise, ActionType action) const;
  int total(Street street, bool facing_raise) const;
  int total() const;
  /// Smoothed frequency. Without a bet to face, fold is impossible and the
  /// prior is split between call and raise only.
  double frequency(Street street, bool facing_raise, ActionType action, bool bet_faced,
                   double prior) const;

  friend bool operator==(const ActionFrequencyTable&, const ActionFrequencyTable&) = default;

 private:
  static int street_index(Street street);
  std::array<std::array<std::array<int, 3>, 2>, 4> counts_{};
};

class OpponentProfile {
 public:
  /// Counts a dealt hand once; repeated calls with the same id are ignored.
  void begin_hand(std::uint64_t hand_id);
  /// Records one of the player's own actions. Starts the hand if needed.
  void observe(std::uint64_t hand_id, const ActionEvent& event);

  int hands_observed() const { return hands_; }
  int vpip_numerator() const { return vpip_hands_; }
  int raises() const { return raises_; }
  int calls() const { return calls_; }
  double vpip() const { return hands_ == 0 ? 0.0 : static_cast<double>(vpip_hands_) / hands_; }
  const ActionFrequencyTable& freq_first() const { return first_; }
  const ActionFrequencyTable& freq_later() const { return later_; }
  const ActionFrequencyTable& freq(bool first_decision) const {
    return first_decision ? first_ : later_;
  }

 private:
  int hands_ = 0;
  int vpip_hands_ = 0;
  int raises_ = 0;
  int calls_ = 0;
  std::optional<std::uint64_t> hand_;
  bool paid_this_hand_ = false;
  ActionFrequencyTable first_;
  ActionFrequencyTable later_;
};

/// raises / calls, where calls exclude free checks. Returns `cap` when only
/// raises were seen and 0 with no data.
double aggression_factor(int raises, int calls, double cap = 10.0);
double aggression_factor(const OpponentProfile& profile, double cap = 10.0);

/// Loose iff vpip >= threshold, aggressive iff af >= threshold.
OpponentType classify(double vpip, double af, const ModelingConfig& config = {});
/// Returns config.prior_type until warmup_hands have been observed.
OpponentType classify(const OpponentProfile& profile, const ModelingConfig& config = {});

/// Profiles for every other player at a table, keyed by player id.
class ProfileBook {
 public:
  OpponentProfile& operator[](int player) { return profiles_[player]; }
  const OpponentProfile* find(int player) const;
  void begin_hand(std::uint64_t hand_id, std::span<const int> players);
  void observe(int player, std::uint64_t hand_id, const ActionEvent& event);
  const std::map<int, OpponentProfile>& all() const { return profiles_; }

  /// "player,hands,vpip,af,type" rows; `name` maps ids to labels.
  std::string to_csv(const std::vector<std::string>& names, const ModelingConfig& config = {}) const;

 private:
  std::map<int, OpponentProfile> profiles_;
};

/// Multiplier applied to a holding at strength percentile `p` after an action
/// seen with frequency `f`: `floor` below the band, 1 above it and linear
/// inside the band of `width` centred on 1 - f.
double ramp_multiplier(double p, double f, double width, double floor);

/// Strength percentile of each live holding in [0, 1], ties sharing the mid
/// rank. Preflop holdings are ordered by `preflop_order`; on a board, by their
/// current made hand.
std::vector<double> strength_percentiles(std::span<const LiveHolding> live,
                                         std::span<const Card> board,
                                         const IncomeRateTable& preflop_order);

struct ReweightResult {
  WeightTable table;
  /// Frequency the ramp used, if the event was informative.
  std::optional<double> frequency;
  /// Every weight reached zero and the table was reset to uniform.
  bool reset = false;
};

/// Applies the ramp for an explicit frequency.
ReweightResult reweight_with_frequency(const WeightTable& table, double frequency,
                                       std::span<const Card> board, std::uint64_t dead,
                                       const IncomeRateTable& preflop_order,
                                       const ModelingConfig& config = {});

/// Narrows an opponent's table after one of their call or raise events. Raises
/// use the raise frequency of the event's bucket; calls facing a bet use the
/// frequency of continuing (call or raise); checks are uninformative and
/// leave the table as is. Throws InvalidInput for folds.
ReweightResult reweight(const WeightTable& table, const ActionEvent& event,
                        const OpponentProfile& profile, std::span<const Card> board,
                        std::uint64_t dead, const IncomeRateTable& preflop_order,
                        const ModelingConfig& config = {});

/// Preflop prior: weight 1 on the best ceil(k * 169) classes by income rate,
/// with k the observed vpip clamped to [0.05, 1]. Uniform during warmup.
WeightTable infer_range(const OpponentProfile& profile, const IncomeRateTable& preflop_order,
                        const ModelingConfig& config = {});
WeightTable top_fraction_range(double fraction, const IncomeRateTable& preflop_order);

}  // namespace holdem
