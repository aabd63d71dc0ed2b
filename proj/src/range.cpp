#include "holdem/range.hpp"

#include <numeric>

namespace holdem {

void WeightTable::set(int index, double w) {
  if (index < 0 || index >= kNumHolePairs) throw InvalidInput("hole index out of range");
  if (!(w >= 0.0 && w <= 1.0)) throw InvalidInput("weight must lie in [0, 1]");
  w_[index] = w;
}

void WeightTable::remove_dead(std::uint64_t dead_mask) {
  if (dead_mask == 0) return;
  for (int i = 0; i < kNumHolePairs; ++i) {
    if (hole_from_index(i).mask() & dead_mask) w_[i] = 0.0;
  }
}

double WeightTable::total() const { return std::accumulate(w_.begin(), w_.end(), 0.0); }

std::vector<LiveHolding> live_holdings(const WeightTable& table, std::uint64_t dead_mask) {
  std::vector<LiveHolding> out;
  out.reserve(kNumHolePairs);
  for (int i = 0; i < kNumHolePairs; ++i) {
    double w = table[i];
    if (w <= 0.0) continue;
    const HoleCards& h = hole_from_index(i);
    if (h.mask() & dead_mask) continue;
    out.push_back({i, h, w});
  }
  return out;
}

}  // namespace holdem
