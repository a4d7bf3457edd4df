// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lipcascade/frames.hpp"
#include "lipcascade/rng.hpp"
#include "lipcascade/textproc/annotation.hpp"

namespace lipcascade::synth {

enum class ContextModel { Bigram, Unigram };
enum class RenderMode { Vector, Image };

inline constexpr std::size_t kToneCount = 5;

/// Parameters of a viseme-ambiguous corpus. Characters sharing a viseme class
/// render identical mouth features and differ only by tone.
struct SynthSpec {
  std::size_t n_chars = 40;
  std::size_t n_visemes = 8;
  std::size_t frame_dim = 24;
  std::size_t frames_per_syllable = 6;
  double tone_channel_amplitude = 1.0;
  double noise_sigma = 0.3;
  double bigram_temperature = 1.0;
  std::size_t min_length = 4;
  std::size_t max_length = 10;
  ContextModel context = ContextModel::Bigram;
  RenderMode render = RenderMode::Vector;
  std::size_t image_height = 64;
  std::size_t image_width = 128;
  /// Permits n_chars == n_visemes (no ambiguity); off by default.
  bool allow_unambiguous = false;

  /// Length of one rendered frame: frame_dim, or height * width for images.
  std::size_t rendered_dim() const;
  void validate() const;
};

struct LexiconEntry {
  std::string character;
  std::size_t viseme;
  text::Syllable syllable;
  text::ToneId tone;
};

struct Lexicon {
  std::vector<LexiconEntry> entries;
  std::size_t n_visemes = 0;

  std::size_t index_of(const std::string& character) const;
  /// Unordered pairs of characters with equal viseme class and different tone.
  std::size_t homoviseme_pair_count() const;
  /// Characters other than `index` in the same viseme class.
  std::vector<std::size_t> partners(std::size_t index) const;
};

/// Round-robin viseme classes; same-class characters receive distinct tones
/// drawn from a seeded permutation.
Lexicon make_lexicon(const SynthSpec& spec, std::uint64_t seed);

/// Row-stochastic character transition table plus a start distribution.
struct BigramTable {
  std::size_t size = 0;
  std::vector<double> start;
  std::vector<double> transition;  // [size, size]

  std::span<const double> row(std::size_t from) const {
    return {transition.data() + from * size, size};
  }
};

/// Softmax of N(0,1)/temperature logits per row; uniform rows for a unigram
/// (context-free) spec.
BigramTable make_bigram_table(const SynthSpec& spec, std::uint64_t seed);

std::vector<std::size_t> sample_char_sequence(const BigramTable& table,
                                              std::size_t min_length,
                                              std::size_t max_length, Rng& rng);

text::SentenceAnnotation annotate(const Lexicon& lexicon,
                                  std::span<const std::size_t> char_indices);

text::SentenceAnnotation sample_sentence(const Lexicon& lexicon, const BigramTable& table,
                                         std::size_t min_length, std::size_t max_length,
                                         Rng& rng);

/// frames_per_syllable frames per character. Vector layout: a viseme one-hot
/// block, then amplitude times a tone one-hot block, then zero padding; the
/// whole frame is scaled by a per-syllable mouth-opening envelope and
/// Gaussian noise is added everywhere.
VideoFrames render_frames(const text::SentenceAnnotation& annotation,
                          const Lexicon& lexicon, const SynthSpec& spec, Rng& rng);

struct SynthSample {
  VideoFrames frames;
  text::SentenceAnnotation annotation;
};

struct SynthCorpus {
  Lexicon lexicon;
  BigramTable bigram;
  std::vector<SynthSample> train;
  std::vector<SynthSample> val;
  std::vector<SynthSample> test;
};

/// In-memory generation. Each sample draws from its own substream derived from
/// (seed, split, index), so output does not depend on generation order.
SynthCorpus generate_corpus(const SynthSpec& spec, std::size_t n_train, std::size_t n_val,
                            std::size_t n_test, std::uint64_t seed);

/// Writes train.tsv / val.tsv / test.tsv manifests, frames/*.frm and
/// lexicon.tsv under out_dir.
void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& out_dir);

SynthCorpus generate_dataset(const SynthSpec& spec, std::size_t n_train, std::size_t n_val,
                             std::size_t n_test, std::uint64_t seed,
                             const std::filesystem::path& out_dir);

/// Reads `frames_path<TAB>chars<TAB>pinyin<TAB>tones` lines; relative frame
/// paths resolve against the manifest's directory.
std::vector<SynthSample> load_manifest(const std::filesystem::path& manifest);

void write_manifest(const std::filesystem::path& manifest,
                    std::span<const SynthSample> samples, const std::string& stem);

}  // namespace lipcascade::synth
