// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/textproc/annotation.hpp"

#include <limits>
#include <sstream>

#include "lipcascade/error.hpp"

namespace lipcascade::text {

void SentenceAnnotation::validate() const {
  if (pinyin.size() != chars.size() || tones.size() != chars.size()) {
    throw AlignmentError("annotation lengths differ: " + std::to_string(chars.size()) +
                         " chars, " + std::to_string(pinyin.size()) + " syllables, " +
                         std::to_string(tones.size()) + " tones");
  }
}

std::vector<std::string> SentenceAnnotation::pinyin_tokens() const {
  std::vector<std::string> out;
  out.reserve(pinyin.size());
  for (const auto& s : pinyin) out.push_back(s.str());
  return out;
}

std::vector<std::string> SentenceAnnotation::tone_tokens() const {
  std::vector<std::string> out;
  out.reserve(tones.size());
  for (const auto& t : tones) out.push_back(t.str());
  return out;
}

std::vector<std::string> split_tokens(std::string_view field) {
  std::vector<std::string> out;
  std::istringstream in{std::string(field)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

SentenceAnnotation parse_corpus_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  if (fields.size() < 2 || fields.size() > 3) {
    throw ParseError("corpus line needs 2 or 3 tab-separated fields, got " +
                     std::to_string(fields.size()));
  }
  SentenceAnnotation a;
  a.chars = split_tokens(fields[0]);
  for (const auto& tok : split_tokens(fields[1])) {
    TonedSyllable ts = parse_toned_pinyin(tok);
    a.pinyin.push_back(ts.syllable);
    a.tones.push_back(ts.tone);
  }
  if (fields.size() == 3) {
    a.tones.clear();
    for (const auto& tok : split_tokens(fields[2])) {
      if (tok.size() != 1 || tok[0] < '0' || tok[0] > '4') {
        throw ParseError("tone token '" + tok + "' is not a digit 0-4");
      }
      a.tones.emplace_back(tok[0] - '0');
    }
  }
  a.validate();
  return a;
}

EncodedAnnotation encode_annotation(const Vocabularies& vocabs, const SentenceAnnotation& a) {
  a.validate();
  return {vocabs.pinyin.encode(a.pinyin_tokens()), vocabs.tone.encode(a.tone_tokens()),
          vocabs.character.encode(a.chars)};
}

CurriculumBucket bucket_for_length(std::size_t length) {
  if (length <= 11) return {0, 0, 11};
  if (length <= 17) return {1, 12, 17};
  if (length <= 23) return {2, 18, 23};
  return {3, 24, std::numeric_limits<std::size_t>::max()};
}

std::array<std::vector<std::size_t>, kBucketCount> bucket_by_length(
    std::span<const SentenceAnnotation> sentences) {
  std::array<std::vector<std::size_t>, kBucketCount> buckets;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    buckets[static_cast<std::size_t>(bucket_for_length(sentences[i].length()).index)]
        .push_back(i);
  }
  return buckets;
}

}  // namespace lipcascade::text
