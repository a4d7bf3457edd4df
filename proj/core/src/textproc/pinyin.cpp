// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/textproc/pinyin.hpp"

#include <array>
#include <cctype>

#include "lipcascade/error.hpp"

namespace lipcascade::text {
namespace {

constexpr std::array<std::string_view, 23> kInitials = {
    "zh", "ch", "sh", "b", "p", "m", "f", "d", "t", "n", "l", "g",
    "k",  "h",  "j",  "q", "x", "r", "z", "c", "s", "y", "w"};

bool all_lower(std::string_view s) {
  for (char c : s) {
    if (c < 'a' || c > 'z') return false;
  }
  return true;
}

}  // namespace

Syllable::Syllable(std::string text) : text_(std::move(text)) {
  if (text_.empty() || !all_lower(text_)) {
    throw ParseError("syllable '" + text_ + "' must match [a-z]+");
  }
}

ToneId::ToneId(int value) : value_(static_cast<std::uint8_t>(value)) {
  if (value < 0 || value > 4) {
    throw ParseError("tone " + std::to_string(value) + " outside 0-4");
  }
}

TonedSyllable parse_toned_pinyin(std::string_view token) {
  const std::string tok(token);
  std::size_t letters = 0;
  while (letters < token.size() && token[letters] >= 'a' && token[letters] <= 'z') {
    ++letters;
  }
  if (letters == 0) {
    throw ParseError("'" + tok + "': expected letters at position 0");
  }
  int tone = 0;
  if (letters < token.size()) {
    const char c = token[letters];
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError("'" + tok + "': unexpected character at position " +
                       std::to_string(letters));
    }
    if (c > '4') {
      throw ParseError("'" + tok + "': tone digit " + std::string(1, c) +
                       " > 4 at position " + std::to_string(letters));
    }
    if (letters + 1 != token.size()) {
      throw ParseError("'" + tok + "': trailing characters after tone at position " +
                       std::to_string(letters + 1));
    }
    tone = c - '0';
  }
  return {Syllable(std::string(token.substr(0, letters))), ToneId(tone)};
}

std::string join_toned(const TonedSyllable& s) {
  std::string out = s.syllable.str();
  if (s.tone.value() != 0) out += s.tone.str();
  return out;
}

InitialFinal split_initial_final(const Syllable& s) {
  const std::string& text = s.str();
  // Two-letter initials are listed first, so the first match is the longest.
  for (std::string_view initial : kInitials) {
    if (text.starts_with(initial)) {
      if (text.size() == initial.size()) {
        throw ParseError("syllable '" + text + "' has an empty final");
      }
      return {std::string(initial), text.substr(initial.size())};
    }
  }
  return {"", text};
}

}  // namespace lipcascade::text
