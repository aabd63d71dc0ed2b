#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "holdem/cards.hpp"

namespace holdem {

/// Distribution over an opponent's 1326 possible hole pairs. Weights are
/// absolute values in [0, 1], not probabilities; pairs that contain a dead
/// (visible) card carry weight 0.
class WeightTable {
 public:
  /// Uniform: every pair weighted 1.
  WeightTable() { w_.fill(1.0); }

  static WeightTable uniform() { return {}; }
  static WeightTable zeros() {
    WeightTable t;
    t.w_.fill(0.0);
    return t;
  }

  double operator[](int index) const { return w_[index]; }
  double weight(const HoleCards& hole) const { return w_[hole_index(hole)]; }
  /// Throws InvalidInput unless 0 <= w <= 1.
  void set(int index, double w);
  void set(const HoleCards& hole, double w) { set(hole_index(hole), w); }

  /// Zeroes every pair that shares a card with `dead_mask`.
  void remove_dead(std::uint64_t dead_mask);
  double total() const;
  bool all_zero() const { return total() <= 0.0; }
  std::span<const double> weights() const { return w_; }

  friend bool operator==(const WeightTable&, const WeightTable&) = default;

 private:
  std::array<double, kNumHolePairs> w_;
};

/// Live (hole index, weight) entries of a table once `dead_mask` cards are
/// removed, skipping zero weights.
struct LiveHolding {
  int index;
  HoleCards hole;
  double weight;
};
std::vector<LiveHolding> live_holdings(const WeightTable& table, std::uint64_t dead_mask);

}  // namespace holdem
