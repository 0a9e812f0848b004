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

#include "dhumbal/cards.h"

#include <algorithm>
#include <cctype>
#include <string>

#include "dhumbal/errors.h"

namespace dhumbal {

namespace {

constexpr char kRankChar[] = "A23456789TJQK";
constexpr char kSuitChar[] = "CDHS";

// Mask of the cards of `suit` at ranks [lo, hi].
std::uint64_t run_mask(Suit suit, int lo, int hi) {
  std::uint64_t m = 0;
  for (int r = lo; r <= hi; ++r) {
    m |= std::uint64_t{1} << ((r - 1) * kNumSuits + static_cast<int>(suit));
  }
  return m;
}

}  // namespace

int card_value(int rank) {
  if (rank < 1 || rank > kNumRanks) {
    throw DomainError("card rank must be in 1..13, got " + std::to_string(rank));
  }
  return rank;
}

Card::Card(int rank, Suit suit) {
  card_value(rank);
  bit_ = static_cast<std::uint8_t>((rank - 1) * kNumSuits + static_cast<int>(suit));
}

Card Card::from_deck_index(int index) {
  if (index < 0 || index >= kNumCards) {
    throw DomainError("deck index must be in 0..51, got " + std::to_string(index));
  }
  return Card(index % kNumRanks + 1, static_cast<Suit>(index / kNumRanks));
}

int hand_value(CardSet hand) {
  int total = 0;
  for (int r = 1; r <= kNumRanks; ++r) total += std::popcount(hand.rank_mask(r)) * r;
  return total;
}

bool is_valid_sequence(std::span<const Card> cards) {
  if (cards.size() < 3) return false;
  std::vector<Card> sorted(cards.begin(), cards.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].suit() != sorted[0].suit()) return false;
    if (i > 0 && sorted[i].rank() != sorted[i - 1].rank() + 1) return false;
  }
  return true;
}

std::optional<DiscardGroup> DiscardGroup::classify(CardSet cards) {
  const int n = cards.size();
  if (n == 0) return std::nullopt;
  if (n == 1) return DiscardGroup{GroupKind::kSingle, cards};
  const int rank = cards.lowest().rank();
  if (std::popcount(cards.rank_mask(rank)) == n) return DiscardGroup{GroupKind::kSet, cards};
  const auto list = cards.to_vector();
  if (is_valid_sequence(list)) return DiscardGroup{GroupKind::kSequence, cards};
  return std::nullopt;
}

void enumerate_legal_discards(CardSet hand, std::vector<DiscardGroup>& out) {
  if (hand.empty()) throw StateError("cannot enumerate discards of an empty hand");
  out.clear();
  for (Card c : hand) out.push_back(DiscardGroup::single(c));

  for (int r = 1; r <= kNumRanks; ++r) {
    const unsigned suits = hand.rank_mask(r);
    if (std::popcount(suits) < 2) continue;
    // Sub-masks of `suits` in increasing numeric order.
    for (unsigned sub = 1; sub <= suits; ++sub) {
      if ((sub & ~suits) != 0 || std::popcount(sub) < 2) continue;
      out.push_back({GroupKind::kSet,
                     CardSet(std::uint64_t{sub} << ((r - 1) * kNumSuits))});
    }
  }

  for (int s = 0; s < kNumSuits; ++s) {
    const auto suit = static_cast<Suit>(s);
    for (int start = 1; start + 2 <= kNumRanks; ++start) {
      if (!hand.contains(Card(start, suit))) continue;
      int end = start;
      while (end + 1 <= kNumRanks && hand.contains(Card(end + 1, suit))) {
        ++end;
        if (end - start + 1 >= 3) {
          out.push_back({GroupKind::kSequence, CardSet(run_mask(suit, start, end))});
        }
      }
    }
  }
}

std::vector<DiscardGroup> enumerate_legal_discards(CardSet hand) {
  std::vector<DiscardGroup> out;
  enumerate_legal_discards(hand, out);
  return out;
}

bool is_legal_discard(CardSet hand, const DiscardGroup& group) {
  if (group.cards.empty() || !group.cards.is_subset_of(hand)) return false;
  const auto kind = DiscardGroup::classify(group.cards);
  return kind && kind->kind == group.kind;
}

std::string to_string(Card c) {
  return {kRankChar[c.rank() - 1], kSuitChar[static_cast<int>(c.suit())]};
}

std::string to_string(CardSet cards) {
  std::string out;
  for (Card c : cards) {
    if (!out.empty()) out += ' ';
    out += to_string(c);
  }
  return out;
}

std::string_view to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::kSingle: return "single";
    case GroupKind::kSet: return "set";
    case GroupKind::kSequence: return "sequence";
  }
  return "?";
}

std::string to_string(const DiscardGroup& group) { return to_string(group.cards); }

std::optional<Card> parse_card(std::string_view text) {
  if (text.empty()) return std::nullopt;
  int rank = 0;
  std::size_t pos = 0;
  if (text.starts_with("10")) {
    rank = 10;
    pos = 2;
  } else {
    const char ch = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    const char* hit = std::find(kRankChar, kRankChar + kNumRanks, ch);
    if (hit == kRankChar + kNumRanks) return std::nullopt;
    rank = static_cast<int>(hit - kRankChar) + 1;
    pos = 1;
  }
  const std::string_view rest = text.substr(pos);
  int suit = -1;
  if (rest.size() == 1) {
    const char ch = static_cast<char>(std::toupper(static_cast<unsigned char>(rest[0])));
    const char* hit = std::find(kSuitChar, kSuitChar + kNumSuits, ch);
    if (hit != kSuitChar + kNumSuits) suit = static_cast<int>(hit - kSuitChar);
  } else if (rest == "♣") {
    suit = 0;
  } else if (rest == "♦") {
    suit = 1;
  } else if (rest == "♥") {
    suit = 2;
  } else if (rest == "♠") {
    suit = 3;
  }
  if (suit < 0) return std::nullopt;
  return Card(rank, static_cast<Suit>(suit));
}

std::optional<CardSet> parse_cards(std::string_view text) {
  CardSet out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != ',') ++j;
    if (j > i) {
      const auto card = parse_card(text.substr(i, j - i));
      if (!card || out.contains(*card)) return std::nullopt;
      out.insert(*card);
    }
    i = j;
  }
  return out;
}

}  // namespace dhumbal
