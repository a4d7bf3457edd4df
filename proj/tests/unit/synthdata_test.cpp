// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "lipcascade/error.hpp"
#include "lipcascade/synthdata/frame_io.hpp"
#include "lipcascade/synthdata/synth.hpp"

namespace lipcascade::synth {
namespace {

namespace fs = std::filesystem;

SynthSpec small_spec() {
  SynthSpec s;
  s.n_chars = 12;
  s.n_visemes = 6;
  s.frame_dim = 12;
  s.frames_per_syllable = 5;
  s.min_length = 2;
  s.max_length = 5;
  return s;
}

fs::path scratch(const char* name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Lexicon, HomovisemeClassesHaveDistinctTones) {
  const SynthSpec spec = small_spec();
  const Lexicon lex = make_lexicon(spec, 3);
  ASSERT_EQ(lex.entries.size(), 12u);
  std::set<std::string> names;
  for (std::size_t i = 0; i < lex.entries.size(); ++i) {
    names.insert(lex.entries[i].character);
    EXPECT_LT(lex.entries[i].viseme, spec.n_visemes);
    for (std::size_t j : lex.partners(i)) {
      EXPECT_EQ(lex.entries[j].viseme, lex.entries[i].viseme);
      EXPECT_EQ(lex.entries[j].syllable, lex.entries[i].syllable);
      EXPECT_NE(lex.entries[j].tone, lex.entries[i].tone);
    }
  }
  EXPECT_EQ(names.size(), 12u);
  EXPECT_EQ(lex.homoviseme_pair_count(), 6u);  // six classes of two
}

TEST(Spec, Validation) {
  SynthSpec s = small_spec();
  s.n_chars = 6;
  EXPECT_THROW(s.validate(), SpecError);  // no ambiguity
  s.allow_unambiguous = true;
  EXPECT_NO_THROW(s.validate());
  s = small_spec();
  s.n_chars = 36;  // six per class but only five tones
  EXPECT_THROW(s.validate(), SpecError);
  s = small_spec();
  s.frames_per_syllable = 4;
  EXPECT_THROW(s.validate(), SpecError);
  s = small_spec();
  s.frame_dim = 10;
  EXPECT_THROW(s.validate(), SpecError);
  s = small_spec();
  s.min_length = 6;
  EXPECT_THROW(s.validate(), SpecError);
}

TEST(Bigram, RowsAreDistributions) {
  const BigramTable t = make_bigram_table(small_spec(), 4);
  double start = 0.0;
  for (double p : t.start) start += p;
  EXPECT_NEAR(start, 1.0, 1e-12);
  for (std::size_t i = 0; i < t.size; ++i) {
    double total = 0.0;
    for (double p : t.row(i)) {
      EXPECT_GT(p, 0.0);
      total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Bigram, EmpiricalTransitionsWithinThreeSigma) {
  const BigramTable t = make_bigram_table(small_spec(), 4);
  Rng rng(99);
  const std::size_t draws = 10000;
  for (std::size_t from : {0u, 5u}) {
    std::vector<std::size_t> counts(t.size, 0);
    for (std::size_t k = 0; k < draws; ++k) ++counts[rng.categorical(t.row(from))];
    for (std::size_t j = 0; j < t.size; ++j) {
      const double p = t.row(from)[j];
      const double sigma = std::sqrt(draws * p * (1.0 - p));
      EXPECT_LE(std::abs(static_cast<double>(counts[j]) - draws * p), 3.0 * sigma)
          << from << "->" << j;
    }
  }
}

TEST(Bigram, UnigramIsUniform) {
  SynthSpec s = small_spec();
  s.context = ContextModel::Unigram;
  const BigramTable t = make_bigram_table(s, 4);
  for (double p : t.transition) EXPECT_DOUBLE_EQ(p, 1.0 / 12.0);
}

TEST(Render, LayoutWithoutNoise) {
  SynthSpec s = small_spec();
  s.noise_sigma = 0.0;
  const Lexicon lex = make_lexicon(s, 1);
  const std::size_t idx[] = {0, 7, 3};
  const auto a = annotate(lex, idx);
  Rng rng(1);
  const VideoFrames f = render_frames(a, lex, s, rng);
  EXPECT_EQ(f.count, 15u);
  EXPECT_EQ(f.dim, 12u);
  for (std::size_t syl = 0; syl < 3; ++syl) {
    const auto& e = lex.entries[idx[syl]];
    for (std::size_t k = 0; k < 5; ++k) {
      const auto frame = f.frame(syl * 5 + k);
      for (std::size_t d = 0; d < s.n_visemes; ++d) {
        if (d == e.viseme) {
          EXPECT_GT(frame[d], 0.0f);
        } else {
          EXPECT_EQ(frame[d], 0.0f);
        }
      }
      const std::size_t tone_slot = s.n_visemes + static_cast<std::size_t>(e.tone.value());
      EXPECT_FLOAT_EQ(frame[tone_slot], static_cast<float>(s.tone_channel_amplitude) * frame[e.viseme]);
      EXPECT_EQ(frame[11], 0.0f);  // padding
    }
  }
}

TEST(Render, PartnerSwapInvisibleWithoutToneChannel) {
  SynthSpec s = small_spec();
  s.tone_channel_amplitude = 0.0;
  const Lexicon lex = make_lexicon(s, 2);
  for (std::size_t c = 0; c < lex.entries.size(); ++c) {
    for (std::size_t p : lex.partners(c)) {
      const std::size_t a[] = {1, c, 4};
      const std::size_t b[] = {1, p, 4};
      Rng r1(5, "render", c), r2(5, "render", c);
      EXPECT_EQ(render_frames(annotate(lex, a), lex, s, r1),
                render_frames(annotate(lex, b), lex, s, r2));
    }
  }
  s.tone_channel_amplitude = 1.0;
  const std::size_t a[] = {0};
  const std::size_t b[] = {lex.partners(0).front()};
  Rng r1(5), r2(5);
  EXPECT_NE(render_frames(annotate(lex, a), lex, s, r1),
            render_frames(annotate(lex, b), lex, s, r2));
}

TEST(Render, ImageModeDimensions) {
  SynthSpec s = small_spec();
  s.render = RenderMode::Image;
  s.image_height = 16;
  s.image_width = 24;
  const Lexicon lex = make_lexicon(s, 1);
  const std::size_t idx[] = {2, 3};
  Rng rng(1);
  const VideoFrames f = render_frames(annotate(lex, idx), lex, s, rng);
  EXPECT_EQ(f.dim, 16u * 24u);
  EXPECT_EQ(f.count, 10u);
}

TEST(Corpus, DeterministicPerSeed) {
  const SynthSpec s = small_spec();
  const SynthCorpus a = generate_corpus(s, 10, 3, 3, 7);
  const SynthCorpus b = generate_corpus(s, 10, 3, 3, 7);
  const SynthCorpus c = generate_corpus(s, 10, 3, 3, 8);
  ASSERT_EQ(a.train.size(), 10u);
  bool differs = false;
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    EXPECT_EQ(a.train[i].frames, b.train[i].frames);
    EXPECT_EQ(a.train[i].annotation, b.train[i].annotation);
    differs |= !(a.train[i].frames == c.train[i].frames);
    EXPECT_GE(a.train[i].annotation.length(), s.min_length);
    EXPECT_LE(a.train[i].annotation.length(), s.max_length);
  }
  EXPECT_TRUE(differs);
  EXPECT_THROW(generate_corpus(s, 10, 0, 3, 7), SpecError);
}

TEST(Corpus, ManifestRoundTrip) {
  const fs::path dir = scratch("lipcascade_manifest_test");
  const SynthCorpus corpus = generate_dataset(small_spec(), 5, 2, 2, 11, dir);
  for (const char* split : {"train.tsv", "val.tsv", "test.tsv"}) {
    EXPECT_TRUE(fs::exists(dir / split));
  }
  const auto loaded = load_manifest(dir / "train.tsv");
  ASSERT_EQ(loaded.size(), corpus.train.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    EXPECT_EQ(loaded[i].frames, corpus.train[i].frames);
    EXPECT_EQ(loaded[i].annotation, corpus.train[i].annotation);
  }
  {
    std::ofstream bad(dir / "bad.tsv");
    bad << "no-tab-here\n";
  }
  EXPECT_THROW(load_manifest(dir / "bad.tsv"), ParseError);
  EXPECT_THROW(load_manifest(dir / "absent.tsv"), IoError);
  fs::remove_all(dir);
}

TEST(FrameIo, RoundTripAndTruncation) {
  const fs::path dir = scratch("lipcascade_frames_test");
  VideoFrames f{3, 4, {}};
  for (int i = 0; i < 12; ++i) f.data.push_back(static_cast<float>(i) * 0.25f - 1.0f);
  write_frames(dir / "a.frm", f);
  EXPECT_EQ(read_frames(dir / "a.frm"), f);

  const auto size = fs::file_size(dir / "a.frm");
  fs::copy_file(dir / "a.frm", dir / "short.frm");
  fs::resize_file(dir / "short.frm", size - 3);
  EXPECT_THROW(read_frames(dir / "short.frm"), FormatError);
  fs::copy_file(dir / "a.frm", dir / "header.frm");
  fs::resize_file(dir / "header.frm", 2);
  EXPECT_THROW(read_frames(dir / "header.frm"), FormatError);
  {
    std::ofstream out(dir / "a.frm", std::ios::app | std::ios::binary);
    out << 'x';
  }
  EXPECT_THROW(read_frames(dir / "a.frm"), FormatError);
  EXPECT_THROW(read_frames(dir / "none.frm"), IoError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace lipcascade::synth
