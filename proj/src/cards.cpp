#include "holdem/cards.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>

#include "sklansky_asset.hpp"

namespace holdem {
namespace {

constexpr std::string_view kRankChars = "23456789TJQKA";
constexpr std::string_view kSuitChars = "cdhs";

// Highest rank index (0..12) topping a five-card straight in a 13-bit rank
// mask, or -1. The wheel reports rank index 3 (a five-high straight).
constexpr std::array<std::int8_t, 8192> make_straight_table() {
  std::array<std::int8_t, 8192> table{};
  for (int mask = 0; mask < 8192; ++mask) {
    int extended = (mask << 1) | ((mask >> 12) & 1);  // bit 0 is the low ace
    int best = -1;
    for (int top = 13; top >= 4; --top) {
      int window = 0x1F << (top - 4);
      if ((extended & window) == window) {
        best = top - 1;
        break;
      }
    }
    table[mask] = static_cast<std::int8_t>(best);
  }
  return table;
}

constexpr auto kStraightTop = make_straight_table();

constexpr std::uint32_t pack(int category, int t0, int t1 = 0, int t2 = 0,
                             int t3 = 0, int t4 = 0) {
  return (static_cast<std::uint32_t>(category) << 20) |
         (static_cast<std::uint32_t>(t0) << 16) |
         (static_cast<std::uint32_t>(t1) << 12) |
         (static_cast<std::uint32_t>(t2) << 8) |
         (static_cast<std::uint32_t>(t3) << 4) | static_cast<std::uint32_t>(t4);
}

// Top `n` set rank indices of a mask, highest first, as rank values.
void top_ranks(unsigned mask, int n, int* out) {
  for (int i = 0; i < n; ++i) {
    int hi = std::bit_width(mask) - 1;
    out[i] = hi + 2;
    mask &= ~(1u << hi);
  }
}

struct HoleIndexTable {
  std::array<HoleCards, kNumHolePairs> pairs;
  std::array<std::array<std::int16_t, kDeckSize>, kDeckSize> index{};

  HoleIndexTable() {
    int k = 0;
    for (int a = 0; a < kDeckSize; ++a) {
      for (int b = a + 1; b < kDeckSize; ++b) {
        pairs[k] = HoleCards(Card(a), Card(b));
        index[a][b] = index[b][a] = static_cast<std::int16_t>(k);
        ++k;
      }
    }
  }
};

const HoleIndexTable& hole_table() {
  static const HoleIndexTable table;
  return table;
}

}  // namespace

char rank_char(int rank) {
  if (rank < 2 || rank > 14) throw InvalidInput("rank out of range");
  return kRankChars[rank - 2];
}

char suit_char(int suit) {
  if (suit < 0 || suit > 3) throw InvalidInput("suit out of range");
  return kSuitChars[suit];
}

std::string Card::str() const {
  return {rank_char(rank()), suit_char(suit())};
}

Card Card::parse(std::string_view text) {
  if (text.size() != 2) {
    throw InvalidInput("card must be two characters: '" + std::string(text) + "'");
  }
  auto r = kRankChars.find(static_cast<char>(std::toupper(text[0])));
  auto s = kSuitChars.find(static_cast<char>(std::tolower(text[1])));
  if (r == std::string_view::npos || s == std::string_view::npos) {
    throw InvalidInput("bad card '" + std::string(text) + "'");
  }
  return Card(static_cast<int>(r) + 2, static_cast<int>(s));
}

std::vector<Card> parse_cards(std::string_view text) {
  std::vector<Card> cards;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ' || text[i] == ',') {
      ++i;
      continue;
    }
    if (i + 1 >= text.size()) throw InvalidInput("truncated card text");
    cards.push_back(Card::parse(text.substr(i, 2)));
    i += 2;
  }
  return cards;
}

std::string cards_str(std::span<const Card> cards) {
  std::string out;
  for (Card c : cards) out += c.str();
  return out;
}

std::uint64_t card_mask(std::span<const Card> cards) {
  std::uint64_t mask = 0;
  for (Card c : cards) {
    if (c.index() >= kDeckSize) throw InvalidInput("card index out of range");
    if (mask & c.bit()) throw InvalidInput("duplicate card " + c.str());
    mask |= c.bit();
  }
  return mask;
}

std::string_view category_name(HandCategory category) {
  static constexpr std::array<std::string_view, 9> kNames = {
      "high-card", "pair",  "two-pair",   "trips",         "straight",
      "flush",     "full-house", "quads", "straight-flush"};
  return kNames[static_cast<int>(category)];
}

HandRank::HandRank(HandCategory category, std::span<const int> tiebreak) {
  if (tiebreak.size() > 5) throw InvalidInput("tiebreak longer than five");
  int t[5] = {0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < tiebreak.size(); ++i) t[i] = tiebreak[i];
  value_ = pack(static_cast<int>(category), t[0], t[1], t[2], t[3], t[4]);
}

std::array<int, 5> HandRank::tiebreak() const {
  return {static_cast<int>((value_ >> 16) & 0xF), static_cast<int>((value_ >> 12) & 0xF),
          static_cast<int>((value_ >> 8) & 0xF), static_cast<int>((value_ >> 4) & 0xF),
          static_cast<int>(value_ & 0xF)};
}

std::string HandRank::str() const {
  std::string out(category_name(category()));
  out += '(';
  bool first = true;
  for (int r : tiebreak()) {
    if (r == 0) continue;
    if (!first) out += ',';
    out += rank_char(r);
    first = false;
  }
  out += ')';
  return out;
}

HandRank PartialHand::rank() const {
  const unsigned all = suit_masks_[0] | suit_masks_[1] | suit_masks_[2] | suit_masks_[3];

  int flush_suit = -1;
  for (int s = 0; s < kNumSuits; ++s) {
    if (std::popcount(static_cast<unsigned>(suit_masks_[s])) >= 5) {
      flush_suit = s;
      break;
    }
  }
  if (flush_suit >= 0) {
    int top = kStraightTop[suit_masks_[flush_suit]];
    if (top >= 0) return HandRank::from_value(pack(8, top + 2));
  }

  int quad = -1, trips[2] = {-1, -1}, pairs[3] = {-1, -1, -1};
  int n_trips = 0, n_pairs = 0;
  for (int r = kNumRanks - 1; r >= 0; --r) {
    switch (counts_[r]) {
      case 4: quad = r; break;
      case 3: if (n_trips < 2) trips[n_trips++] = r; break;
      case 2: if (n_pairs < 3) pairs[n_pairs++] = r; break;
      default: break;
    }
  }

  if (quad >= 0) {
    unsigned rest = all & ~(1u << quad);
    int kicker = std::bit_width(rest) + 1;
    return HandRank::from_value(pack(7, quad + 2, kicker));
  }
  if (n_trips > 0 && (n_trips > 1 || n_pairs > 0)) {
    int pair = n_trips > 1 ? trips[1] : -1;
    if (n_pairs > 0) pair = std::max(pair, pairs[0]);
    return HandRank::from_value(pack(6, trips[0] + 2, pair + 2));
  }
  if (flush_suit >= 0) {
    int t[5];
    top_ranks(suit_masks_[flush_suit], 5, t);
    return HandRank::from_value(pack(5, t[0], t[1], t[2], t[3], t[4]));
  }
  if (int top = kStraightTop[all]; top >= 0) {
    return HandRank::from_value(pack(4, top + 2));
  }
  if (n_trips > 0) {
    int k[2];
    top_ranks(all & ~(1u << trips[0]), 2, k);
    return HandRank::from_value(pack(3, trips[0] + 2, k[0], k[1]));
  }
  if (n_pairs >= 2) {
    int k[1];
    top_ranks(all & ~(1u << pairs[0]) & ~(1u << pairs[1]), 1, k);
    return HandRank::from_value(pack(2, pairs[0] + 2, pairs[1] + 2, k[0]));
  }
  if (n_pairs == 1) {
    int k[3];
    top_ranks(all & ~(1u << pairs[0]), 3, k);
    return HandRank::from_value(pack(1, pairs[0] + 2, k[0], k[1], k[2]));
  }
  int t[5];
  top_ranks(all, 5, t);
  return HandRank::from_value(pack(0, t[0], t[1], t[2], t[3], t[4]));
}

HandRank evaluate(std::span<const Card> cards) {
  if (cards.size() < 5 || cards.size() > 7) {
    throw InvalidInput("evaluate needs 5 to 7 cards, got " + std::to_string(cards.size()));
  }
  card_mask(cards);
  return PartialHand(cards).rank();
}

HoleCards::HoleCards(Card a, Card b) {
  if (a == b) throw InvalidInput("hole cards must be distinct: " + a.str());
  high = a > b ? a : b;
  low = a > b ? b : a;
}

HoleCards HoleCards::parse(std::string_view text) {
  auto cards = parse_cards(text);
  if (cards.size() != 2) throw InvalidInput("hole needs two cards: '" + std::string(text) + "'");
  return HoleCards(cards[0], cards[1]);
}

int hole_index(const HoleCards& hole) {
  return hole_table().index[hole.high.index()][hole.low.index()];
}

const HoleCards& hole_from_index(int index) { return hole_table().pairs.at(index); }

PreflopClass::PreflopClass(int id) : id_(id) {
  if (id < 0 || id >= kNumPreflopClasses) throw InvalidInput("preflop class out of range");
}

int PreflopClass::high_rank() const {
  int row = id_ / 13, col = id_ % 13;
  return 14 - std::min(row, col);
}

int PreflopClass::low_rank() const {
  int row = id_ / 13, col = id_ % 13;
  return 14 - std::max(row, col);
}

bool PreflopClass::is_suited() const { return id_ / 13 < id_ % 13; }

std::string PreflopClass::label() const {
  std::string out{rank_char(high_rank()), rank_char(low_rank())};
  if (!is_pair()) out += is_suited() ? 's' : 'o';
  return out;
}

int PreflopClass::combos() const { return is_pair() ? 6 : (is_suited() ? 4 : 12); }

PreflopClass PreflopClass::from_label(std::string_view label) {
  if (label.size() < 2 || label.size() > 3) {
    throw InvalidInput("bad class label '" + std::string(label) + "'");
  }
  auto hi = kRankChars.find(label[0]);
  auto lo = kRankChars.find(label[1]);
  if (hi == std::string_view::npos || lo == std::string_view::npos) {
    throw InvalidInput("bad class label '" + std::string(label) + "'");
  }
  int high = static_cast<int>(hi) + 2, low = static_cast<int>(lo) + 2;
  if (high < low) std::swap(high, low);
  int row = 14 - high, col = 14 - low;
  if (high == low) {
    if (label.size() != 2) throw InvalidInput("pair label takes no suffix");
    return PreflopClass(row * 13 + row);
  }
  if (label.size() != 3 || (label[2] != 's' && label[2] != 'o')) {
    throw InvalidInput("non-pair label needs s/o suffix: '" + std::string(label) + "'");
  }
  return label[2] == 's' ? PreflopClass(row * 13 + col) : PreflopClass(col * 13 + row);
}

PreflopClass canonical_class(const HoleCards& hole) {
  int hi = 14 - hole.high.rank(), lo = 14 - hole.low.rank();
  if (hi == lo) return PreflopClass(hi * 13 + hi);
  if (hole.high.suit() == hole.low.suit()) return PreflopClass(hi * 13 + lo);
  return PreflopClass(lo * 13 + hi);
}

PreflopClass canonical_class(Card a, Card b) { return canonical_class(HoleCards(a, b)); }

SklanskyTable SklanskyTable::parse(std::string_view text) {
  SklanskyTable table;
  std::array<bool, kNumPreflopClasses> seen{};
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string label, group;
    if (!(fields >> label)) continue;
    if (!(fields >> group)) {
      throw InvalidInput("sklansky table line " + std::to_string(line_no) + ": missing group");
    }
    PreflopClass cls = PreflopClass::from_label(label);
    if (seen[cls.id()]) {
      throw InvalidInput("sklansky table line " + std::to_string(line_no) + ": duplicate " + label);
    }
    seen[cls.id()] = true;
    if (group == "-") {
      table.groups_[cls.id()] = std::nullopt;
    } else {
      int g = std::stoi(group);
      if (g < 1 || g > 9) {
        throw InvalidInput("sklansky table line " + std::to_string(line_no) + ": bad group");
      }
      table.groups_[cls.id()] = g;
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw InvalidInput("sklansky table does not cover all 169 classes");
  }
  return table;
}

SklanskyTable SklanskyTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

const SklanskyTable& SklanskyTable::builtin() {
  static const SklanskyTable table = parse(kSklanskyAsset);
  return table;
}

SklanskyGroup sklansky_group(PreflopClass cls) { return SklanskyTable::builtin().group(cls); }

}  // namespace holdem
