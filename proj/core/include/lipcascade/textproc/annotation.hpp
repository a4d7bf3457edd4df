// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lipcascade/textproc/pinyin.hpp"
#include "lipcascade/textproc/vocab.hpp"

namespace lipcascade::text {

/// One sentence: one syllable and one tone per character.
struct SentenceAnnotation {
  std::vector<std::string> chars;
  std::vector<Syllable> pinyin;
  std::vector<ToneId> tones;

  std::size_t length() const { return chars.size(); }
  /// Throws AlignmentError unless the three lists have equal length.
  void validate() const;

  std::vector<std::string> pinyin_tokens() const;
  std::vector<std::string> tone_tokens() const;

  bool operator==(const SentenceAnnotation&) const = default;
};

/// Parses "chars<TAB>toned pinyin[<TAB>tones]"; each field is space-separated.
/// Pinyin tokens may carry tone digits; an explicit tones field wins.
SentenceAnnotation parse_corpus_line(std::string_view line);

std::vector<std::string> split_tokens(std::string_view field);

struct Vocabularies {
  Vocab pinyin;
  Vocab tone;
  Vocab character;
};

/// Id sequences, each terminated by [eos].
struct EncodedAnnotation {
  std::vector<TokenId> pinyin;
  std::vector<TokenId> tone;
  std::vector<TokenId> chars;
};

EncodedAnnotation encode_annotation(const Vocabularies& vocabs, const SentenceAnnotation& a);

/// Curriculum bucket: 0 for <= 11 characters, 1 for 12-17, 2 for 18-23,
/// 3 for >= 24.
struct CurriculumBucket {
  int index;
  std::size_t min_length;
  std::size_t max_length;  // inclusive; SIZE_MAX for the last bucket
};

inline constexpr std::size_t kBucketCount = 4;

CurriculumBucket bucket_for_length(std::size_t length);

/// Sentence indices per bucket; every sentence lands in exactly one bucket.
std::array<std::vector<std::size_t>, kBucketCount> bucket_by_length(
    std::span<const SentenceAnnotation> sentences);

}  // namespace lipcascade::text
