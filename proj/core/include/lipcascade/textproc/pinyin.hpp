// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lipcascade::text {

/// Toneless pinyin syllable: non-empty lowercase ASCII letters ('v' spells ü).
class Syllable {
 public:
  explicit Syllable(std::string text);
  const std::string& str() const { return text_; }
  auto operator<=>(const Syllable&) const = default;

 private:
  std::string text_;
};

/// Mandarin tone: 1-4, with 0 for the neutral tone.
class ToneId {
 public:
  explicit ToneId(int value);
  int value() const { return value_; }
  std::string str() const { return std::string(1, static_cast<char>('0' + value_)); }
  auto operator<=>(const ToneId&) const = default;

 private:
  std::uint8_t value_;
};

struct TonedSyllable {
  Syllable syllable;
  ToneId tone;
};

/// "rang4" -> (rang, 4); "de" -> (de, 0).
TonedSyllable parse_toned_pinyin(std::string_view token);

/// Inverse of parse_toned_pinyin for nonzero tones; neutral tone gets no digit.
std::string join_toned(const TonedSyllable& s);

struct InitialFinal {
  std::string initial;  // possibly empty
  std::string final_part;
};

/// Longest-prefix match against the Mandarin initials.
InitialFinal split_initial_final(const Syllable& s);

}  // namespace lipcascade::text
