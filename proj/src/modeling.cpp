#include "holdem/modeling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "holdem/text.hpp"

namespace holdem {

namespace {

constexpr std::array<std::string_view, kNumOpponentTypes> kTypeNames = {"TA", "TP", "LA", "LP"};

const std::array<std::uint8_t, kNumHolePairs>& class_of_pair() {
  static const auto table = [] {
    std::array<std::uint8_t, kNumHolePairs> t{};
    for (int i = 0; i < kNumHolePairs; ++i) {
      t[i] = static_cast<std::uint8_t>(canonical_class(hole_from_index(i)).id());
    }
    return t;
  }();
  return table;
}

// Mid-rank percentile of each score among all scores.
template <typename Score>
std::vector<double> mid_rank_percentiles(const std::vector<Score>& scores) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> out(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && !(scores[order[i]] < scores[order[j]])) ++j;
    const double p = (static_cast<double>(i) + 0.5 * static_cast<double>(j - i)) / static_cast<double>(n);
    for (std::size_t k = i; k < j; ++k) out[order[k]] = p;
    i = j;
  }
  return out;
}

}  // namespace

std::string_view type_name(OpponentType type) { return kTypeNames[static_cast<int>(type)]; }

OpponentType parse_type(std::string_view text) {
  for (int i = 0; i < kNumOpponentTypes; ++i) {
    if (kTypeNames[i] == text) return static_cast<OpponentType>(i);
  }
  throw InvalidInput("unknown opponent type '" + std::string(text) + "'");
}

int ActionFrequencyTable::street_index(Street street) {
  const int s = static_cast<int>(street);
  if (s > 3) throw InvalidInput("frequency tables cover betting streets only");
  return s;
}

void ActionFrequencyTable::add(Street street, bool facing_raise, ActionType action) {
  ++counts_[street_index(street)][facing_raise][static_cast<int>(action)];
}

int ActionFrequencyTable::count(Street street, bool facing_raise, ActionType action) const {
  return counts_[street_index(street)][facing_raise][static_cast<int>(action)];
}

int ActionFrequencyTable::total(Street street, bool facing_raise) const {
  const auto& c = counts_[street_index(street)][facing_raise];
  return c[0] + c[1] + c[2];
}

int ActionFrequencyTable::total() const {
  int sum = 0;
  for (const auto& street : counts_)
    for (const auto& bucket : street) sum += bucket[0] + bucket[1] + bucket[2];
  return sum;
}

double ActionFrequencyTable::frequency(Street street, bool facing_raise, ActionType action,
                                       bool bet_faced, double prior) const {
  const int options = bet_faced ? 3 : 2;
  if (!bet_faced && action == ActionType::kFold) return 0.0;
  const double n = static_cast<double>(total(street, facing_raise));
  const double k = static_cast<double>(count(street, facing_raise, action));
  return (k + prior / options) / (n + prior);
}

void OpponentProfile::begin_hand(std::uint64_t hand_id) {
  if (hand_ && *hand_ == hand_id) return;
  hand_ = hand_id;
  paid_this_hand_ = false;
  ++hands_;
}

void OpponentProfile::observe(std::uint64_t hand_id, const ActionEvent& event) {
  begin_hand(hand_id);
  if (event.street == Street::kPreflop && event.action != ActionType::kFold && event.amount > 0 &&
      !paid_this_hand_) {
    paid_this_hand_ = true;
    ++vpip_hands_;
  }
  if (event.action == ActionType::kRaise) ++raises_;
  if (event.action == ActionType::kCall && event.amount > 0) ++calls_;
  if (event.street <= Street::kRiver) {
    (event.first_decision ? first_ : later_).add(event.street, event.facing_raise, event.action);
  }
}

double aggression_factor(int raises, int calls, double cap) {
  if (calls == 0) return raises > 0 ? cap : 0.0;
  return static_cast<double>(raises) / calls;
}

double aggression_factor(const OpponentProfile& profile, double cap) {
  return aggression_factor(profile.raises(), profile.calls(), cap);
}

OpponentType classify(double vpip, double af, const ModelingConfig& config) {
  const bool loose = vpip >= config.vpip_threshold;
  const bool aggressive = af >= config.af_threshold;
  if (loose) return aggressive ? OpponentType::kLooseAggressive : OpponentType::kLoosePassive;
  return aggressive ? OpponentType::kTightAggressive : OpponentType::kTightPassive;
}

OpponentType classify(const OpponentProfile& profile, const ModelingConfig& config) {
  if (profile.hands_observed() < config.warmup_hands) return config.prior_type;
  return classify(profile.vpip(), aggression_factor(profile, config.af_cap), config);
}

const OpponentProfile* ProfileBook::find(int player) const {
  auto it = profiles_.find(player);
  return it == profiles_.end() ? nullptr : &it->second;
}

void ProfileBook::begin_hand(std::uint64_t hand_id, std::span<const int> players) {
  for (int p : players) profiles_[p].begin_hand(hand_id);
}

void ProfileBook::observe(int player, std::uint64_t hand_id, const ActionEvent& event) {
  profiles_[player].observe(hand_id, event);
}

std::string ProfileBook::to_csv(const std::vector<std::string>& names,
                                const ModelingConfig& config) const {
  std::string out = "player,hands,vpip,af,type\n";
  for (const auto& [id, p] : profiles_) {
    const std::string name =
        id >= 0 && static_cast<std::size_t>(id) < names.size() ? names[id] : std::to_string(id);
    out += name + ',' + std::to_string(p.hands_observed()) + ',' + format_double(p.vpip()) + ',' +
           format_double(aggression_factor(p, config.af_cap)) + ',' +
           std::string(type_name(classify(p, config))) + '\n';
  }
  return out;
}

double ramp_multiplier(double p, double f, double width, double floor) {
  const double centre = 1.0 - f;
  const double lo = centre - width / 2, hi = centre + width / 2;
  if (p >= hi) return 1.0;
  if (p <= lo) return floor;
  return std::max(floor, (p - lo) / width);
}

std::vector<double> strength_percentiles(std::span<const LiveHolding> live,
                                         std::span<const Card> board,
                                         const IncomeRateTable& preflop_order) {
  if (board.empty()) {
    std::vector<double> ev(live.size());
    for (std::size_t i = 0; i < live.size(); ++i) {
      ev[i] = preflop_order.ev[class_of_pair()[live[i].index]];
    }
    return mid_rank_percentiles(ev);
  }
  PartialHand base(board);
  std::vector<HandRank> ranks(live.size());
  for (std::size_t i = 0; i < live.size(); ++i) {
    PartialHand h = base;
    h.add(live[i].hole.high);
    h.add(live[i].hole.low);
    ranks[i] = h.rank();
  }
  return mid_rank_percentiles(ranks);
}

ReweightResult reweight_with_frequency(const WeightTable& table, double frequency,
                                       std::span<const Card> board, std::uint64_t dead,
                                       const IncomeRateTable& preflop_order,
                                       const ModelingConfig& config) {
  ReweightResult out{table, frequency, false};
  out.table.remove_dead(dead);
  if (frequency >= 1.0) return out;
  const auto live = live_holdings(out.table, dead);
  const auto pct = strength_percentiles(live, board, preflop_order);
  for (std::size_t i = 0; i < live.size(); ++i) {
    const double m = ramp_multiplier(pct[i], frequency, config.ramp_width, config.ramp_floor);
    out.table.set(live[i].index, live[i].weight * m);
  }
  if (out.table.all_zero()) {
    out.table = WeightTable::uniform();
    out.table.remove_dead(dead);
    out.reset = true;
  }
  return out;
}

ReweightResult reweight(const WeightTable& table, const ActionEvent& event,
                        const OpponentProfile& profile, std::span<const Card> board,
                        std::uint64_t dead, const IncomeRateTable& preflop_order,
                        const ModelingConfig& config) {
  if (event.action == ActionType::kFold) {
    throw InvalidInput("folded players leave the hand; there is nothing to reweight");
  }
  const auto& freq = profile.freq(event.first_decision);
  const bool bet_faced = event.to_call > 0;
  if (event.action == ActionType::kCall && !bet_faced) {
    ReweightResult out{table, std::nullopt, false};
    out.table.remove_dead(dead);
    return out;
  }
  double f = freq.frequency(event.street, event.facing_raise, ActionType::kRaise, bet_faced,
                            config.frequency_prior);
  if (event.action == ActionType::kCall) {
    f += freq.frequency(event.street, event.facing_raise, ActionType::kCall, bet_faced,
                        config.frequency_prior);
  }
  return reweight_with_frequency(table, std::min(f, 1.0), board, dead, preflop_order, config);
}

WeightTable top_fraction_range(double fraction, const IncomeRateTable& preflop_order) {
  const double k = std::clamp(fraction, 0.05, 1.0);
  const auto count = static_cast<std::size_t>(std::ceil(k * kNumPreflopClasses - 1e-9));
  const auto order = preflop_order.ranking();
  std::array<bool, kNumPreflopClasses> keep{};
  for (std::size_t i = 0; i < count && i < order.size(); ++i) keep[order[i].id()] = true;
  WeightTable t = WeightTable::zeros();
  for (int i = 0; i < kNumHolePairs; ++i) {
    if (keep[class_of_pair()[i]]) t.set(i, 1.0);
  }
  return t;
}

WeightTable infer_range(const OpponentProfile& profile, const IncomeRateTable& preflop_order,
                        const ModelingConfig& config) {
  if (profile.hands_observed() < config.warmup_hands) return WeightTable::uniform();
  return top_fraction_range(profile.vpip(), preflop_order);
}

}  // namespace holdem
