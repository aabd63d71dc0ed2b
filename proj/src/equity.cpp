#include "holdem/equity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include <omp.h>

#include "holdem/text.hpp"

namespace holdem {
namespace {

enum Outcome { kAhead = 0, kTied = 1, kBehind = 2 };

Outcome compare(HandRank hero, HandRank villain) {
  if (hero > villain) return kAhead;
  if (hero == villain) return kTied;
  return kBehind;
}

// HP[current][final] weights plus per-current totals, in the layout used by
// the classic potential formulas.
struct PotentialTally {
  std::array<double, 9> hp{};
  std::array<double, 3> total{};

  void add(Outcome now, Outcome later, double w) {
    hp[now * 3 + later] += w;
    total[now] += w;
  }
  void merge(const PotentialTally& o) {
    for (int i = 0; i < 9; ++i) hp[i] += o.hp[i];
    for (int i = 0; i < 3; ++i) total[i] += o.total[i];
  }
  Potential finish() const {
    auto at = [&](Outcome a, Outcome b) { return hp[a * 3 + b]; };
    Potential p;
    double pden = total[kBehind] + total[kTied] / 2.0;
    double nden = total[kAhead] + total[kTied] / 2.0;
    if (pden > 0) {
      p.ppot = (at(kBehind, kAhead) + at(kBehind, kTied) / 2.0 + at(kTied, kAhead) / 2.0) / pden;
    }
    if (nden > 0) {
      p.npot = (at(kAhead, kBehind) + at(kTied, kBehind) / 2.0 + at(kAhead, kTied) / 2.0) / nden;
    }
    return p;
  }
};

std::vector<Card> remaining_deck(std::uint64_t dead) {
  std::vector<Card> rest;
  rest.reserve(kDeckSize);
  for (int i = 0; i < kDeckSize; ++i) {
    if (!(dead & (std::uint64_t{1} << i))) rest.emplace_back(i);
  }
  return rest;
}

void check_board(std::span<const Card> board, const HoleCards& hole) {
  if (board.size() > 5 || board.size() == 1 || board.size() == 2) {
    throw InvalidInput("board must hold 0, 3, 4 or 5 cards");
  }
  std::uint64_t mask = card_mask(board);
  if (mask & hole.mask()) throw InvalidInput("hole and board share a card");
}

// Draws live holdings in proportion to their weight.
class WeightedSampler {
 public:
  explicit WeightedSampler(std::vector<LiveHolding> live) : live_(std::move(live)) {
    cumulative_.reserve(live_.size());
    double acc = 0.0;
    for (const auto& h : live_) cumulative_.push_back(acc += h.weight);
  }
  bool empty() const { return live_.empty(); }
  const LiveHolding& draw(Rng& rng) const {
    double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return live_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  std::vector<LiveHolding> live_;
  std::vector<double> cumulative_;
};

// Deals `count` cards uniformly from `deck` avoiding `blocked`, by rejection.
template <std::size_t N>
void draw_cards(const std::vector<Card>& deck, std::uint64_t blocked, int count, Rng& rng,
                std::array<Card, N>& out) {
  for (int i = 0; i < count && i < static_cast<int>(N); ++i) {
    Card c;
    do {
      c = deck[rng.below(deck.size())];
    } while (blocked & c.bit());
    blocked |= c.bit();
    out[i] = c;
  }
}

double strength_sampled(const HoleCards& hole, const WeightedSampler& sampler,
                                 const std::vector<Card>& deck, std::uint64_t dead,
                                 std::span<const Card> board, int samples, Rng& rng) {
  // Preflop there is nothing to compare yet, so deal out the whole board.
  const int missing = board.empty() ? 5 : 0;
  PartialHand base(board);
  double score = 0.0;
  std::array<Card, 5> extra{};
  for (int s = 0; s < samples; ++s) {
    const LiveHolding& villain = sampler.draw(rng);
    draw_cards(deck, dead | villain.hole.mask(), missing, rng, extra);
    PartialHand common = base;
    for (int i = 0; i < missing; ++i) common.add(extra[i]);
    PartialHand h = common, v = common;
    h.add(hole.high);
    h.add(hole.low);
    v.add(villain.hole.high);
    v.add(villain.hole.low);
    Outcome o = compare(h.rank(), v.rank());
    score += o == kAhead ? 1.0 : (o == kTied ? 0.5 : 0.0);
  }
  return score / samples;
}

std::uint64_t binomial2(std::uint64_t n) { return n * (n - 1) / 2; }

}  // namespace

EquityConfig EquityConfig::play() {
  EquityConfig c;
  c.max_enumeration = 4'000;
  c.samples = 600;
  c.flop_lookahead = 1;
  return c;
}

double effective_strength(double hs, double ppot) { return hs + (1.0 - hs) * ppot; }

double hand_strength(const HoleCards& hole, std::span<const Card> board,
                     const WeightTable& range, int opponents, const EquityConfig& config,
                     Rng& rng) {
  check_board(board, hole);
  if (opponents < 1) throw InvalidInput("hand_strength needs at least one opponent");
  if (board.empty()) {
    return hand_strength_sampled(hole, board, range, opponents, config.samples, rng);
  }
  const std::uint64_t dead = hole.mask() | card_mask(board);
  PartialHand base(board);
  PartialHand hero = base;
  hero.add(hole.high);
  hero.add(hole.low);
  const HandRank hero_rank = hero.rank();

  double mass = 0.0, score = 0.0;
  for (int i = 0; i < kNumHolePairs; ++i) {
    double w = range[i];
    if (w <= 0.0) continue;
    const HoleCards& v = hole_from_index(i);
    if (v.mask() & dead) continue;
    PartialHand villain = base;
    villain.add(v.high);
    villain.add(v.low);
    Outcome o = compare(hero_rank, villain.rank());
    mass += w;
    score += w * (o == kAhead ? 1.0 : (o == kTied ? 0.5 : 0.0));
  }
  if (mass <= 0.0) throw DegenerateRange("opponent range is empty after removing dead cards");
  return std::pow(score / mass, opponents);
}

double hand_strength_sampled(const HoleCards& hole, std::span<const Card> board,
                             const WeightTable& range, int opponents, int samples, Rng& rng) {
  check_board(board, hole);
  if (opponents < 1) throw InvalidInput("hand_strength needs at least one opponent");
  if (samples < 1) throw InvalidInput("samples must be positive");
  const std::uint64_t dead = hole.mask() | card_mask(board);
  WeightedSampler sampler(live_holdings(range, dead));
  if (sampler.empty()) throw DegenerateRange("opponent range is empty after removing dead cards");
  double p = strength_sampled(hole, sampler, remaining_deck(dead), dead, board,
                                       samples, rng);
  return std::pow(p, opponents);
}

Potential hand_potential_serial(const HoleCards& hole, std::span<const Card> board,
                                const WeightTable& range, int lookahead) {
  check_board(board, hole);
  if (board.size() == 5) return {};
  if (board.size() < 3) throw InvalidInput("hand potential needs a flop or turn board");
  if (lookahead != 1 && lookahead != 2) throw InvalidInput("lookahead must be 1 or 2");
  if (board.size() == 4) lookahead = 1;

  const std::uint64_t dead = hole.mask() | card_mask(board);
  const auto live = live_holdings(range, dead);
  if (live.empty()) throw DegenerateRange("opponent range is empty after removing dead cards");
  const auto deck = remaining_deck(dead);
  std::vector<Card> cards(board.begin(), board.end());
  std::vector<std::vector<Card>> completions;
  for (std::size_t a = 0; a < deck.size(); ++a) {
    if (lookahead == 1) {
      completions.push_back({deck[a]});
      continue;
    }
    for (std::size_t b = a + 1; b < deck.size(); ++b) completions.push_back({deck[a], deck[b]});
  }

  PotentialTally tally;
  for (const auto& v : live) {
    std::vector<Card> hero_now = cards, villain_now = cards;
    hero_now.insert(hero_now.end(), {hole.high, hole.low});
    villain_now.insert(villain_now.end(), {v.hole.high, v.hole.low});
    Outcome now = compare(evaluate(hero_now), evaluate(villain_now));
    for (const auto& extra : completions) {
      if (std::any_of(extra.begin(), extra.end(), [&](Card c) { return v.hole.contains(c); })) {
        continue;
      }
      std::vector<Card> hero_later = hero_now, villain_later = villain_now;
      hero_later.insert(hero_later.end(), extra.begin(), extra.end());
      villain_later.insert(villain_later.end(), extra.begin(), extra.end());
      tally.add(now, compare(evaluate(hero_later), evaluate(villain_later)), v.weight);
    }
  }
  return tally.finish();
}

Potential hand_potential(const HoleCards& hole, std::span<const Card> board,
                         const WeightTable& range, const EquityConfig& config, Rng& rng) {
  check_board(board, hole);
  if (board.size() == 5) return {};
  if (board.size() < 3) throw InvalidInput("hand potential needs a flop or turn board");
  const int lookahead = board.size() == 4 ? 1 : config.flop_lookahead;
  if (lookahead != 1 && lookahead != 2) throw InvalidInput("lookahead must be 1 or 2");

  const std::uint64_t dead = hole.mask() | card_mask(board);
  const auto live = live_holdings(range, dead);
  if (live.empty()) throw DegenerateRange("opponent range is empty after removing dead cards");
  const auto deck = remaining_deck(dead);

  PartialHand base(board);
  PartialHand hero_base = base;
  hero_base.add(hole.high);
  hero_base.add(hole.low);
  const HandRank hero_now = hero_base.rank();

  std::vector<Outcome> now(live.size());
  for (std::size_t i = 0; i < live.size(); ++i) {
    PartialHand v = base;
    v.add(live[i].hole.high);
    v.add(live[i].hole.low);
    now[i] = compare(hero_now, v.rank());
  }

  // Completions: single cards, or unordered pairs of cards.
  std::vector<std::uint64_t> completions;
  if (lookahead == 1) {
    for (Card c : deck) completions.push_back(c.bit());
  } else {
    completions.reserve(binomial2(deck.size()));
    for (std::size_t a = 0; a < deck.size(); ++a)
      for (std::size_t b = a + 1; b < deck.size(); ++b)
        completions.push_back(deck[a].bit() | deck[b].bit());
  }

  const std::uint64_t space = live.size() * completions.size();
  if (space > config.max_enumeration) {
    PotentialTally tally;
    WeightedSampler sampler(live);
    std::vector<int> position(kNumHolePairs, -1);
    for (std::size_t i = 0; i < live.size(); ++i) position[live[i].index] = static_cast<int>(i);
    std::array<Card, 2> extra{};
    for (int s = 0; s < config.samples; ++s) {
      const LiveHolding& v = sampler.draw(rng);
      draw_cards(deck, dead | v.hole.mask(), lookahead, rng, extra);
      PartialHand h = hero_base, o = base;
      o.add(v.hole.high);
      o.add(v.hole.low);
      for (int i = 0; i < lookahead; ++i) {
        h.add(extra[i]);
        o.add(extra[i]);
      }
      tally.add(now[position[v.index]], compare(h.rank(), o.rank()), 1.0);
    }
    return tally.finish();
  }

  // One tally per completion, merged in completion order so the result does
  // not depend on the thread count.
  std::vector<PotentialTally> partial(completions.size());
  const long n = static_cast<long>(completions.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) {
    const std::uint64_t extra = completions[k];
    PartialHand hero = hero_base, common = base;
    for (std::uint64_t m = extra; m; m &= m - 1) {
      Card c(std::countr_zero(m));
      hero.add(c);
      common.add(c);
    }
    const HandRank hero_later = hero.rank();
    PotentialTally& t = partial[k];
    for (std::size_t i = 0; i < live.size(); ++i) {
      if (live[i].hole.mask() & extra) continue;
      PartialHand v = common;
      v.add(live[i].hole.high);
      v.add(live[i].hole.low);
      t.add(now[i], compare(hero_later, v.rank()), live[i].weight);
    }
  }
  PotentialTally tally;
  for (const auto& t : partial) tally.merge(t);
  return tally.finish();
}

Strengths effective_hand_strength(const HoleCards& hole, std::span<const Card> board,
                                  const WeightTable& range, int opponents,
                                  const EquityConfig& config, Rng& rng) {
  Strengths s;
  s.hs = hand_strength(hole, board, range, opponents, config, rng);
  if (board.size() == 3 || board.size() == 4) {
    Potential p = hand_potential(hole, board, range, config, rng);
    s.ppot = p.ppot;
    s.npot = p.npot;
  }
  s.ehs = effective_strength(s.hs, s.ppot);
  return s;
}

Strengths effective_hand_strength(const HoleCards& hole, std::span<const Card> board,
                                  std::span<const WeightTable> ranges,
                                  const EquityConfig& config, Rng& rng) {
  if (ranges.empty()) throw InvalidInput("need at least one opponent range");
  Strengths s;
  s.hs = 1.0;
  double worst = 2.0;
  std::size_t worst_index = 0;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    double h = hand_strength(hole, board, ranges[i], 1, config, rng);
    s.hs *= h;
    if (h < worst) {
      worst = h;
      worst_index = i;
    }
  }
  if (board.size() == 3 || board.size() == 4) {
    Potential p = hand_potential(hole, board, ranges[worst_index], config, rng);
    s.ppot = p.ppot;
    s.npot = p.npot;
  }
  s.ehs = effective_strength(s.hs, s.ppot);
  return s;
}

// ---------------------------------------------------------------------------
// Income-rate roll-outs

namespace {

const std::array<std::vector<HoleCards>, kNumPreflopClasses>& class_members() {
  static const auto members = [] {
    std::array<std::vector<HoleCards>, kNumPreflopClasses> m;
    for (int i = 0; i < kNumHolePairs; ++i) {
      const HoleCards& h = hole_from_index(i);
      m[canonical_class(h).id()].push_back(h);
    }
    return m;
  }();
  return members;
}

double rollout_class(int cls, int players, std::uint64_t iterations, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(cls)}));
  const auto& members = class_members()[cls];
  const int needed = 5 + 2 * (players - 1);
  std::array<Card, kDeckSize> deck{};
  double profit = 0.0;
  for (std::uint64_t it = 0; it < iterations; ++it) {
    const HoleCards& hero = members[rng.below(members.size())];
    int n = 0;
    for (int c = 0; c < kDeckSize; ++c) {
      if (!(hero.mask() & (std::uint64_t{1} << c))) deck[n++] = Card(c);
    }
    for (int i = 0; i < needed; ++i) {
      auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
      std::swap(deck[i], deck[j]);
    }
    PartialHand board(std::span<const Card>(deck.data(), 5));
    PartialHand h = board;
    h.add(hero.high);
    h.add(hero.low);
    const HandRank hero_rank = h.rank();
    bool beaten = false;
    int tied = 1;
    for (int p = 0; p < players - 1 && !beaten; ++p) {
      PartialHand v = board;
      v.add(deck[5 + 2 * p]);
      v.add(deck[6 + 2 * p]);
      HandRank r = v.rank();
      if (r > hero_rank) beaten = true;
      else if (r == hero_rank) ++tied;
    }
    double share = beaten ? 0.0 : 1.0 / tied;
    profit += players * share - 1.0;
  }
  return profit / static_cast<double>(iterations);
}

void check_rollout_args(int players, std::uint64_t iterations) {
  if (players < 2 || players > 10) throw InvalidInput("players must be 2..10");
  if (iterations < 1) throw InvalidInput("iterations must be at least 1");
}

}  // namespace

IncomeRateTable income_rate_table(int players, std::uint64_t iterations, std::uint64_t seed) {
  check_rollout_args(players, iterations);
  class_members();
  IncomeRateTable table;
  table.players = players;
  table.iterations = iterations;
  table.seed = seed;
#pragma omp parallel for schedule(dynamic)
  for (int cls = 0; cls < kNumPreflopClasses; ++cls) {
    table.ev[cls] = rollout_class(cls, players, iterations, seed);
  }
  return table;
}

IncomeRateTable income_rate_table_serial(int players, std::uint64_t iterations,
                                         std::uint64_t seed) {
  check_rollout_args(players, iterations);
  IncomeRateTable table;
  table.players = players;
  table.iterations = iterations;
  table.seed = seed;
  for (int cls = 0; cls < kNumPreflopClasses; ++cls) {
    table.ev[cls] = rollout_class(cls, players, iterations, seed);
  }
  return table;
}

std::vector<PreflopClass> IncomeRateTable::ranking() const {
  std::vector<int> ids(kNumPreflopClasses);
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) { return ev[a] > ev[b]; });
  std::vector<PreflopClass> out;
  out.reserve(ids.size());
  for (int id : ids) out.emplace_back(id);
  return out;
}

std::string IncomeRateTable::to_csv() const {
  std::string out = "class,ev_sb,players,iterations,seed\n";
  for (int cls = 0; cls < kNumPreflopClasses; ++cls) {
    out += PreflopClass(cls).label() + ',' + format_double(ev[cls]) + ',' +
           std::to_string(players) + ',' + std::to_string(iterations) + ',' +
           std::to_string(seed) + '\n';
  }
  return out;
}

IncomeRateTable IncomeRateTable::from_csv(std::string_view text) {
  IncomeRateTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || trim(line) != "class,ev_sb,players,iterations,seed") {
    throw InvalidInput("income table: bad header");
  }
  std::array<bool, kNumPreflopClasses> seen{};
  int rows = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto f = split(trim(line), ',');
    if (f.size() != 5) throw InvalidInput("income table: expected 5 fields: " + line);
    PreflopClass cls = PreflopClass::from_label(f[0]);
    if (seen[cls.id()]) throw InvalidInput("income table: duplicate class " + f[0]);
    seen[cls.id()] = true;
    table.ev[cls.id()] = parse_double(f[1]);
    table.players = static_cast<int>(parse_int(f[2]));
    table.iterations = static_cast<std::uint64_t>(parse_int(f[3]));
    table.seed = static_cast<std::uint64_t>(parse_int(f[4]));
    ++rows;
  }
  if (rows != kNumPreflopClasses) throw InvalidInput("income table: expected 169 rows");
  return table;
}

const IncomeRateTable& cached_income_table(int players, std::uint64_t iterations,
                                           std::uint64_t seed) {
  static std::mutex mutex;
  static std::map<std::tuple<int, std::uint64_t, std::uint64_t>, IncomeRateTable> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(players, iterations, seed);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, income_rate_table(players, iterations, seed)).first;
  }
  return it->second;
}

}  // namespace holdem
