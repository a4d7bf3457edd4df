// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>

#include "lipcascade/error.hpp"
#include "lipcascade/rng.hpp"
#include "lipcascade/textproc/annotation.hpp"
#include "lipcascade/textproc/pinyin.hpp"
#include "lipcascade/textproc/vocab.hpp"

namespace lipcascade::text {
namespace {

TEST(Pinyin, ParseKnownTokens) {
  const auto ts = parse_toned_pinyin("zhong1");
  EXPECT_EQ(ts.syllable.str(), "zhong");
  EXPECT_EQ(ts.tone.value(), 1);
  EXPECT_EQ(parse_toned_pinyin("de").tone.value(), 0);
  EXPECT_EQ(parse_toned_pinyin("ma0").tone.value(), 0);
}

TEST(Pinyin, JoinParseRoundTrip) {
  Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    std::string letters;
    const std::size_t n = 1 + rng.uniform_index(6);
    for (std::size_t i = 0; i < n; ++i) letters += static_cast<char>('a' + rng.uniform_index(26));
    const TonedSyllable ts{Syllable(letters), ToneId(static_cast<int>(rng.uniform_index(5)))};
    const std::string joined = join_toned(ts);
    const TonedSyllable back = parse_toned_pinyin(joined);
    EXPECT_EQ(back.syllable, ts.syllable);
    EXPECT_EQ(back.tone, ts.tone);
    EXPECT_EQ(join_toned(back), joined);
  }
}

TEST(Pinyin, MalformedTokensReportPosition) {
  const auto expect_parse_error = [](std::string_view tok, std::string_view fragment) {
    try {
      parse_toned_pinyin(tok);
      ADD_FAILURE() << "no error for " << tok;
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_parse_error("Ma1", "position 0");
  expect_parse_error("1ma", "position 0");
  expect_parse_error("ma5", "position 2");
  expect_parse_error("ma1x", "position 3");
  expect_parse_error("m-a", "position 1");
  EXPECT_THROW(Syllable(""), ParseError);
  EXPECT_THROW(ToneId(5), ParseError);
}

TEST(Pinyin, InitialFinalSplit) {
  const auto check = [](const char* s, const char* initial, const char* fin) {
    const InitialFinal parts = split_initial_final(Syllable(s));
    EXPECT_EQ(parts.initial, initial) << s;
    EXPECT_EQ(parts.final_part, fin) << s;
  };
  check("zhong", "zh", "ong");
  check("shi", "sh", "i");
  check("chuang", "ch", "uang");
  check("zai", "z", "ai");
  check("ma", "m", "a");
  check("an", "", "an");
  check("er", "", "er");
  check("yu", "y", "u");
  EXPECT_THROW(split_initial_final(Syllable("zh")), ParseError);
}

TEST(Annotation, CorpusLineWithAndWithoutToneField) {
  const auto a = parse_corpus_line("你 好\tni3 hao3");
  EXPECT_EQ(a.length(), 2u);
  EXPECT_EQ(a.pinyin_tokens(), (std::vector<std::string>{"ni", "hao"}));
  EXPECT_EQ(a.tone_tokens(), (std::vector<std::string>{"3", "3"}));
  const auto b = parse_corpus_line("你 好\tni3 hao3\t2 0");
  EXPECT_EQ(b.tone_tokens(), (std::vector<std::string>{"2", "0"}));
  EXPECT_THROW(parse_corpus_line("你 好\tni3"), AlignmentError);
  EXPECT_THROW(parse_corpus_line("你 好"), ParseError);
  EXPECT_THROW(parse_corpus_line("你\tni3\t7"), ParseError);
}

TEST(Vocab, SpecialsFirstAndFrequencyOrder) {
  const std::vector<std::vector<std::string>> corpus = {
      {"b", "a", "c"}, {"a", "c"}, {"a", "d"}};
  const Vocab v = build_vocab(corpus, 0);
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{kSos, kEos, kPad, "a", "c", "b", "d"}));
  EXPECT_EQ(v.id(kSos), v.sos());
  EXPECT_EQ(v.id(kEos), v.eos());
  EXPECT_EQ(v.id(kPad), v.pad());
}

TEST(Vocab, StrictMinCountThreshold) {
  const std::vector<std::vector<std::string>> corpus = {
      {"a", "a", "a"}, {"b", "b"}, {"c"}};
  const Vocab v = build_vocab(corpus, 2);
  EXPECT_TRUE(v.contains("a"));   // 3 > 2
  EXPECT_FALSE(v.contains("b"));  // 2 is not more than 2
  EXPECT_FALSE(v.contains("c"));
  EXPECT_THROW(v.id("b"), VocabError);
}

TEST(Vocab, DeterministicAcrossInputOrder) {
  std::vector<std::vector<std::string>> corpus = {{"x", "y"}, {"y", "z"}, {"z", "x"}};
  const Vocab a = build_vocab(corpus, 0);
  std::reverse(corpus.begin(), corpus.end());
  const Vocab b = build_vocab(corpus, 0);
  EXPECT_EQ(a, b);
}

TEST(Vocab, EncodeAppendsEosAndDecodeDropsSpecials) {
  const Vocab v(std::vector<std::string>{"ni", "hao"});
  const std::vector<std::string> toks = {"hao", "ni"};
  const auto ids = v.encode(toks);
  ASSERT_EQ(ids.size(), 3u);
  EXPECT_EQ(ids.back(), v.eos());
  EXPECT_EQ(v.decode(ids), toks);
  const std::vector<std::string> unknown = {"zai"};
  EXPECT_THROW(v.encode(unknown), VocabError);
  EXPECT_THROW(v.token(99), IndexError);
}

TEST(Vocab, SaveLoadRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "lipcascade_vocab_test";
  std::filesystem::create_directories(dir);
  const Vocab v(std::vector<std::string>{"zh", "ong", "x"});
  v.save(dir / "v.txt");
  EXPECT_EQ(Vocab::load(dir / "v.txt"), v);
  EXPECT_THROW(Vocab::load(dir / "missing.txt"), IoError);
  std::filesystem::remove_all(dir);
}

TEST(Curriculum, BucketBoundaries) {
  for (std::size_t len = 1; len <= 40; ++len) {
    const int want = len <= 11 ? 0 : len <= 17 ? 1 : len <= 23 ? 2 : 3;
    const CurriculumBucket b = bucket_for_length(len);
    EXPECT_EQ(b.index, want) << len;
    EXPECT_GE(len, b.min_length);
    EXPECT_LE(len, b.max_length);
  }
}

TEST(Curriculum, BucketsPartitionTheCorpus) {
  Rng rng(5);
  std::vector<SentenceAnnotation> sentences;
  for (int i = 0; i < 200; ++i) {
    SentenceAnnotation a;
    const std::size_t len = 1 + rng.uniform_index(35);
    for (std::size_t k = 0; k < len; ++k) {
      a.chars.push_back("c");
      a.pinyin.emplace_back("ma");
      a.tones.emplace_back(1);
    }
    sentences.push_back(a);
  }
  const auto buckets = bucket_by_length(sentences);
  std::vector<int> seen(sentences.size(), 0);
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    for (std::size_t i : buckets[b]) {
      ++seen[i];
      EXPECT_EQ(bucket_for_length(sentences[i].length()).index, static_cast<int>(b));
    }
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

}  // namespace
}  // namespace lipcascade::text
