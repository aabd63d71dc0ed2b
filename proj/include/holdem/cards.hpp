#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace holdem {

/// Raised for malformed cards, duplicate cards and other caller mistakes.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kNumRanks = 13;
inline constexpr int kNumSuits = 4;
inline constexpr int kDeckSize = 52;
inline constexpr int kNumHolePairs = 1326;
inline constexpr int kNumPreflopClasses = 169;

/// A playing card. Internally an index 0..51 laid out as (rank - 2) * 4 + suit,
/// suits ordered c, d, h, s.
class Card {
 public:
  constexpr Card() = default;
  constexpr explicit Card(int index) : index_(static_cast<std::uint8_t>(index)) {}
  constexpr Card(int rank, int suit)
      : index_(static_cast<std::uint8_t>((rank - 2) * 4 + suit)) {}

  /// 2..14, ace high.
  constexpr int rank() const { return index_ / 4 + 2; }
  constexpr int rank_index() const { return index_ / 4; }
  constexpr int suit() const { return index_ % 4; }
  constexpr int index() const { return index_; }
  constexpr std::uint64_t bit() const { return std::uint64_t{1} << index_; }

  std::string str() const;
  static Card parse(std::string_view text);

  friend constexpr bool operator==(Card, Card) = default;
  friend constexpr auto operator<=>(Card, Card) = default;

 private:
  std::uint8_t index_ = 0;
};

char rank_char(int rank);
char suit_char(int suit);

/// Parses concatenated card text such as "AhKd" or "Ah Kd 2c".
std::vector<Card> parse_cards(std::string_view text);
std::string cards_str(std::span<const Card> cards);

/// Bitmask of the given cards; throws InvalidInput on duplicates.
std::uint64_t card_mask(std::span<const Card> cards);

enum class HandCategory : std::uint8_t {
  kHighCard = 0,
  kPair,
  kTwoPair,
  kTrips,
  kStraight,
  kFlush,
  kFullHouse,
  kQuads,
  kStraightFlush,
};

std::string_view category_name(HandCategory category);

/// Result of evaluating a hand. The category is followed by a fixed-length
/// five-slot tiebreak of rank values (unused slots are zero), so ordering is
/// plain lexicographic and never looks at suits. Packed into 24 bits.
class HandRank {
 public:
  constexpr HandRank() = default;
  HandRank(HandCategory category, std::span<const int> tiebreak);

  static constexpr HandRank from_value(std::uint32_t value) {
    HandRank r;
    r.value_ = value;
    return r;
  }

  constexpr HandCategory category() const {
    return static_cast<HandCategory>(value_ >> 20);
  }
  std::array<int, 5> tiebreak() const;
  constexpr std::uint32_t value() const { return value_; }

  std::string str() const;

  friend constexpr bool operator==(HandRank, HandRank) = default;
  friend constexpr auto operator<=>(HandRank, HandRank) = default;

 private:
  std::uint32_t value_ = 0;
};

/// Incrementally built set of up to seven cards, kept in the form the
/// evaluator consumes. Copying is cheap, which lets equity code extend a fixed
/// board with many different hole pairs.
class PartialHand {
 public:
  PartialHand() = default;
  explicit PartialHand(std::span<const Card> cards) {
    for (Card c : cards) add(c);
  }

  void add(Card c) {
    suit_masks_[c.suit()] |= static_cast<std::uint16_t>(1u << c.rank_index());
    ++counts_[c.rank_index()];
    ++size_;
  }
  int size() const { return size_; }

  /// Best five-card rank. Requires 5..7 cards; unchecked.
  HandRank rank() const;

 private:
  std::array<std::uint16_t, kNumSuits> suit_masks_{};
  std::array<std::uint8_t, kNumRanks> counts_{};
  int size_ = 0;
};

/// Best five-card rank among 5..7 distinct cards.
HandRank evaluate(std::span<const Card> cards);

/// Two distinct cards, stored high card first.
struct HoleCards {
  Card high;
  Card low;

  HoleCards() = default;
  HoleCards(Card a, Card b);

  std::uint64_t mask() const { return high.bit() | low.bit(); }
  bool contains(Card c) const { return c == high || c == low; }
  std::string str() const { return high.str() + low.str(); }
  static HoleCards parse(std::string_view text);

  friend bool operator==(const HoleCards&, const HoleCards&) = default;
};

/// Index of a hole pair in 0..1325 (combinatorial order on card indices).
int hole_index(const HoleCards& hole);
const HoleCards& hole_from_index(int index);

/// One of the 169 suit-isomorphism classes of starting hands. Ids follow the
/// usual 13x13 grid with aces first: row and column are 14 - rank, suited
/// hands above the diagonal, offsuit below, pairs on it.
class PreflopClass {
 public:
  constexpr PreflopClass() = default;
  explicit PreflopClass(int id);

  int id() const { return id_; }
  int high_rank() const;
  int low_rank() const;
  bool is_pair() const { return high_rank() == low_rank(); }
  bool is_suited() const;
  /// "AA", "AKs", "72o".
  std::string label() const;
  /// Number of concrete hole pairs in the class: 6, 4 or 12.
  int combos() const;

  static PreflopClass from_label(std::string_view label);

  friend bool operator==(PreflopClass, PreflopClass) = default;
  friend auto operator<=>(PreflopClass, PreflopClass) = default;

 private:
  int id_ = 0;
};

PreflopClass canonical_class(const HoleCards& hole);
PreflopClass canonical_class(Card a, Card b);

/// Sklansky starting-hand group: 1 (best) .. 8, or nullopt for unplayable.
using SklanskyGroup = std::optional<int>;

/// Group assignment for every preflop class, loaded from the shipped
/// plain-text asset ("<label> <group|->" per line, '#' comments).
class SklanskyTable {
 public:
  static SklanskyTable parse(std::string_view text);
  static SklanskyTable load(const std::string& path);
  /// Table compiled in from assets/sklansky_groups.txt.
  static const SklanskyTable& builtin();

  SklanskyGroup group(PreflopClass cls) const { return groups_[cls.id()]; }

 private:
  std::array<SklanskyGroup, kNumPreflopClasses> groups_{};
};

SklanskyGroup sklansky_group(PreflopClass cls);

}  // namespace holdem
