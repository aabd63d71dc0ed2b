#pragma once

// Brute-force equity references for tests. Every hand is scored with the
// naive best-of-subsets classifier, never with the production evaluator.

#include <array>
#include <vector>

#include "holdem/range.hpp"
#include "oracle.hpp"

namespace holdem::oracle {

inline int outcome(const std::vector<Card>& hero, const std::vector<Card>& villain) {
  HandRank a = best_of_subsets(hero), b = best_of_subsets(villain);
  return a > b ? 0 : (a == b ? 1 : 2);  // ahead, tied, behind
}

inline std::vector<Card> with(std::vector<Card> base, std::initializer_list<Card> more) {
  base.insert(base.end(), more);
  return base;
}

inline bool overlaps(const HoleCards& h, const std::vector<Card>& cards) {
  for (Card c : cards)
    if (h.contains(c)) return true;
  return false;
}

// Weighted immediate hand strength for one opponent.
inline double brute_hand_strength(const HoleCards& hole, const std::vector<Card>& board,
                                  const WeightTable& range) {
  auto visible = with(board, {hole.high, hole.low});
  double mass = 0, score = 0;
  for (int i = 0; i < kNumHolePairs; ++i) {
    const HoleCards& v = hole_from_index(i);
    if (range[i] <= 0 || overlaps(v, visible)) continue;
    int o = outcome(with(board, {hole.high, hole.low}), with(board, {v.high, v.low}));
    mass += range[i];
    score += range[i] * (o == 0 ? 1.0 : (o == 1 ? 0.5 : 0.0));
  }
  return score / mass;
}

// Potential by full enumeration of one more board card.
inline std::array<double, 2> brute_potential_one_card(const HoleCards& hole,
                                                      const std::vector<Card>& board,
                                                      const WeightTable& range) {
  double hp[3][3] = {}, total[3] = {};
  auto visible = with(board, {hole.high, hole.low});
  for (int i = 0; i < kNumHolePairs; ++i) {
    const HoleCards& v = hole_from_index(i);
    if (range[i] <= 0 || overlaps(v, visible)) continue;
    int now = outcome(with(board, {hole.high, hole.low}), with(board, {v.high, v.low}));
    for (int c = 0; c < kDeckSize; ++c) {
      Card next(c);
      bool used = v.contains(next);
      for (Card x : visible) used = used || x == next;
      if (used) continue;
      auto later_board = with(board, {next});
      int later = outcome(with(later_board, {hole.high, hole.low}),
                          with(later_board, {v.high, v.low}));
      hp[now][later] += range[i];
      total[now] += range[i];
    }
  }
  double ppot = (hp[2][0] + hp[2][1] / 2 + hp[1][0] / 2) / (total[2] + total[1] / 2);
  double npot = (hp[0][2] + hp[1][2] / 2 + hp[0][1] / 2) / (total[0] + total[1] / 2);
  return {ppot, npot};
}

}  // namespace holdem::oracle
