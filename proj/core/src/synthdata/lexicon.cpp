// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "lipcascade/error.hpp"
#include "lipcascade/synthdata/synth.hpp"

namespace lipcascade::synth {
namespace {

constexpr std::array<const char*, 40> kSyllables = {
    "ba",   "ma",   "shi",  "ji",   "lao",  "xing", "hui",   "rang",
    "dang", "qian", "dao",  "ju",   "you",  "xiao", "ying",  "dui",
    "ban",  "zhi",  "lian", "gao",  "duan", "mai",  "jin",   "sui",
    "zhe",  "wo",   "guo",  "yi",   "xue",  "ke",   "bu",    "xiang",
    "quan", "qiu",  "zhong", "tian", "nian", "de",  "chi",   "gui"};

std::string syllable_for(std::size_t viseme) {
  if (viseme < kSyllables.size()) return kSyllables[viseme];
  // Past the table: letters-only labels "qa", "qb", ...
  std::string label = "q";
  std::size_t v = viseme - kSyllables.size();
  do {
    label += static_cast<char>('a' + v % 26);
    v /= 26;
  } while (v > 0);
  return label;
}

std::string char_token(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "c%03zu", index);
  return buf;
}

}  // namespace

std::size_t SynthSpec::rendered_dim() const {
  return render == RenderMode::Image ? image_height * image_width : frame_dim;
}

void SynthSpec::validate() const {
  if (n_visemes < 1) throw SpecError("n_visemes must be at least 1");
  if (n_chars < n_visemes) {
    throw SpecError("n_chars (" + std::to_string(n_chars) + ") < n_visemes (" +
                    std::to_string(n_visemes) + ")");
  }
  if (n_chars == n_visemes && !allow_unambiguous) {
    throw SpecError("n_chars == n_visemes leaves no viseme ambiguity");
  }
  const std::size_t per_class = (n_chars + n_visemes - 1) / n_visemes;
  if (per_class > kToneCount) {
    throw SpecError(std::to_string(per_class) +
                    " characters share a viseme class but only 5 tones exist");
  }
  if (frames_per_syllable < 5) throw SpecError("frames_per_syllable must be at least 5");
  if (tone_channel_amplitude < 0.0) throw SpecError("tone_channel_amplitude must be >= 0");
  if (noise_sigma < 0.0) throw SpecError("noise_sigma must be >= 0");
  if (context == ContextModel::Bigram && !(bigram_temperature > 0.0)) {
    throw SpecError("bigram_temperature must be positive");
  }
  if (min_length < 1 || max_length < min_length) {
    throw SpecError("sentence length range must satisfy 1 <= min <= max");
  }
  if (render == RenderMode::Vector && frame_dim < n_visemes + kToneCount) {
    throw SpecError("frame_dim " + std::to_string(frame_dim) +
                    " too small for viseme block + tone block (" +
                    std::to_string(n_visemes + kToneCount) + ")");
  }
  if (render == RenderMode::Image && (image_height < 16 || image_width < 16)) {
    throw SpecError("image frames must be at least 16x16");
  }
}

std::size_t Lexicon::index_of(const std::string& character) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].character == character) return i;
  }
  throw VocabError("character '" + character + "' not in lexicon");
}

std::size_t Lexicon::homoviseme_pair_count() const {
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      if (entries[i].viseme == entries[j].viseme && entries[i].tone != entries[j].tone) {
        ++pairs;
      }
    }
  }
  return pairs;
}

std::vector<std::size_t> Lexicon::partners(std::size_t index) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < entries.size(); ++j) {
    if (j != index && entries[j].viseme == entries[index].viseme) out.push_back(j);
  }
  return out;
}

Lexicon make_lexicon(const SynthSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed, "lexicon");
  std::vector<std::array<int, kToneCount>> class_tones(spec.n_visemes);
  for (auto& perm : class_tones) {
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<int>(perm));
  }
  Lexicon lex;
  lex.n_visemes = spec.n_visemes;
  for (std::size_t c = 0; c < spec.n_chars; ++c) {
    const std::size_t viseme = c % spec.n_visemes;
    const std::size_t rank_in_class = c / spec.n_visemes;
    lex.entries.push_back({char_token(c), viseme, text::Syllable(syllable_for(viseme)),
                           text::ToneId(class_tones[viseme][rank_in_class])});
  }
  return lex;
}

BigramTable make_bigram_table(const SynthSpec& spec, std::uint64_t seed) {
  const std::size_t n = spec.n_chars;
  BigramTable table;
  table.size = n;
  table.start.assign(n, 1.0 / static_cast<double>(n));
  table.transition.assign(n * n, 1.0 / static_cast<double>(n));
  if (spec.context == ContextModel::Unigram) return table;
  Rng rng(seed, "bigram");
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> logits(n);
    double mx = -1e300;
    for (auto& l : logits) {
      l = rng.normal() / spec.bigram_temperature;
      mx = std::max(mx, l);
    }
    double total = 0.0;
    for (auto& l : logits) total += (l = std::exp(l - mx));
    for (std::size_t j = 0; j < n; ++j) table.transition[i * n + j] = logits[j] / total;
  }
  return table;
}

std::vector<std::size_t> sample_char_sequence(const BigramTable& table,
                                              std::size_t min_length,
                                              std::size_t max_length, Rng& rng) {
  const std::size_t length =
      min_length + static_cast<std::size_t>(rng.uniform_index(max_length - min_length + 1));
  std::vector<std::size_t> seq;
  seq.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    seq.push_back(i == 0 ? rng.categorical(table.start)
                         : rng.categorical(table.row(seq.back())));
  }
  return seq;
}

text::SentenceAnnotation annotate(const Lexicon& lexicon,
                                  std::span<const std::size_t> char_indices) {
  text::SentenceAnnotation a;
  for (std::size_t c : char_indices) {
    const LexiconEntry& e = lexicon.entries.at(c);
    a.chars.push_back(e.character);
    a.pinyin.push_back(e.syllable);
    a.tones.push_back(e.tone);
  }
  return a;
}

text::SentenceAnnotation sample_sentence(const Lexicon& lexicon, const BigramTable& table,
                                         std::size_t min_length, std::size_t max_length,
                                         Rng& rng) {
  const auto seq = sample_char_sequence(table, min_length, max_length, rng);
  return annotate(lexicon, seq);
}

}  // namespace lipcascade::synth
