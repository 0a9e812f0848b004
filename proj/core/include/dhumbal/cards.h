// Copyright 2026 The Dhumbal Bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DHUMBAL_CARDS_H_
#define DHUMBAL_CARDS_H_

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dhumbal {

inline constexpr int kNumRanks = 13;
inline constexpr int kNumSuits = 4;
inline constexpr int kNumCards = 52;

// Suit order is also the tie-break order of the canonical card ordering.
enum class Suit : std::uint8_t { kClubs = 0, kDiamonds = 1, kHearts = 2, kSpades = 3 };

// Point value of a rank: Ace 1, pips at face value, J/Q/K 11/12/13.
// Throws DomainError outside 1..13.
int card_value(int rank);

// A playing card. Cards compare in canonical order: ascending rank, ties by
// suit (Clubs < Diamonds < Hearts < Spades).
class Card {
 public:
  constexpr Card() = default;
  // Throws DomainError for a rank outside 1..13.
  Card(int rank, Suit suit);

  static constexpr Card from_bit(int bit) {
    Card c;
    c.bit_ = static_cast<std::uint8_t>(bit);
    return c;
  }
  // Inverse of deck_index().
  static Card from_deck_index(int index);

  constexpr int rank() const { return bit_ / kNumSuits + 1; }
  constexpr Suit suit() const { return static_cast<Suit>(bit_ % kNumSuits); }
  constexpr int value() const { return rank(); }

  // Position in canonical order, 0..51. Used as the CardSet bit.
  constexpr int bit() const { return bit_; }
  // Suit-major index suit*13 + rank-1, used by the learning encodings.
  constexpr int deck_index() const {
    return static_cast<int>(suit()) * kNumRanks + rank() - 1;
  }

  friend constexpr auto operator<=>(Card, Card) = default;

 private:
  std::uint8_t bit_ = 0;
};

// Compact set of cards; bit i holds the card with canonical position i, so
// iteration is always in canonical order.
class CardSet {
 public:
  class Iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Card;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = Card;

    constexpr Iterator() = default;
    constexpr explicit Iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr Card operator*() const { return Card::from_bit(std::countr_zero(rest_)); }
    constexpr Iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr Iterator operator++(int) {
      Iterator old = *this;
      ++*this;
      return old;
    }
    friend constexpr bool operator==(Iterator, Iterator) = default;

   private:
    std::uint64_t rest_ = 0;
  };

  static constexpr std::uint64_t kFullMask = (std::uint64_t{1} << kNumCards) - 1;

  constexpr CardSet() = default;
  constexpr explicit CardSet(std::uint64_t bits) : bits_(bits & kFullMask) {}
  CardSet(std::initializer_list<Card> cards) {
    for (Card c : cards) insert(c);
  }
  explicit CardSet(std::span<const Card> cards) {
    for (Card c : cards) insert(c);
  }

  static constexpr CardSet full_deck() { return CardSet(kFullMask); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(Card c) const { return (bits_ >> c.bit()) & 1; }
  constexpr void insert(Card c) { bits_ |= std::uint64_t{1} << c.bit(); }
  constexpr void erase(Card c) { bits_ &= ~(std::uint64_t{1} << c.bit()); }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool is_subset_of(CardSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(CardSet other) const { return (bits_ & other.bits_) != 0; }

  // 4-bit mask of the suits held at `rank` (bit s = Suit s).
  constexpr unsigned rank_mask(int rank) const {
    return static_cast<unsigned>((bits_ >> ((rank - 1) * kNumSuits)) & 0xF);
  }

  // Canonical minimum / maximum. Precondition: non-empty.
  constexpr Card lowest() const { return Card::from_bit(std::countr_zero(bits_)); }
  constexpr Card highest() const { return Card::from_bit(63 - std::countl_zero(bits_)); }

  constexpr Iterator begin() const { return Iterator(bits_); }
  constexpr Iterator end() const { return Iterator(0); }

  std::vector<Card> to_vector() const { return {begin(), end()}; }

  constexpr CardSet operator|(CardSet o) const { return CardSet(bits_ | o.bits_); }
  constexpr CardSet operator&(CardSet o) const { return CardSet(bits_ & o.bits_); }
  constexpr CardSet operator-(CardSet o) const { return CardSet(bits_ & ~o.bits_); }
  constexpr CardSet& operator|=(CardSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr CardSet& operator-=(CardSet o) {
    bits_ &= ~o.bits_;
    return *this;
  }
  friend constexpr bool operator==(CardSet, CardSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

// Sum of card values; 0 for the empty set.
int hand_value(CardSet hand);

// True iff >= 3 cards of one suit with strictly consecutive ranks, Ace low
// and no wrap-around (Q-K-A is not a sequence).
bool is_valid_sequence(std::span<const Card> cards);

enum class GroupKind : std::uint8_t { kSingle, kSet, kSequence };

// A legal discard. Cards are kept in canonical order; the card that can be
// picked off the pile afterwards is the last one in that order.
struct DiscardGroup {
  GroupKind kind = GroupKind::kSingle;
  CardSet cards;

  static DiscardGroup single(Card c) { return {GroupKind::kSingle, CardSet{c}}; }
  // Returns the group formed by exactly these cards, if they form one.
  static std::optional<DiscardGroup> classify(CardSet cards);

  int size() const { return cards.size(); }
  int value() const { return hand_value(cards); }
  Card top() const { return cards.highest(); }

  friend bool operator==(const DiscardGroup&, const DiscardGroup&) = default;
};

// Every Single, every same-rank subset of size >= 2 and every same-suit run
// of length >= 3 contained in `hand`. Order: singles in canonical card order,
// then sets by rank and suit mask, then sequences by suit, start rank and
// length. Throws StateError on an empty hand.
std::vector<DiscardGroup> enumerate_legal_discards(CardSet hand);
// Allocation-free variant for hot loops; clears and fills `out`.
void enumerate_legal_discards(CardSet hand, std::vector<DiscardGroup>& out);
bool is_legal_discard(CardSet hand, const DiscardGroup& group);

// "AC", "TD", "KS". Parsing also accepts "10", lowercase and the
// ♣♦♥♠ symbols.
std::string to_string(Card c);
std::string to_string(CardSet cards);
std::string to_string(const DiscardGroup& group);
std::string_view to_string(GroupKind kind);
std::optional<Card> parse_card(std::string_view text);
// Whitespace- or comma-separated card list.
std::optional<CardSet> parse_cards(std::string_view text);

}  // namespace dhumbal

#endif  // DHUMBAL_CARDS_H_
