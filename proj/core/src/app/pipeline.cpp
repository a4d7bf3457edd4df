// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/app/pipeline.hpp"

#include "lipcascade/error.hpp"

namespace lipcascade::app {

text::Vocabularies build_vocabularies(std::span<const synth::SynthSample> train,
                                      std::size_t min_count) {
  std::vector<std::vector<std::string>> pinyin, tone, chars;
  for (const auto& s : train) {
    pinyin.push_back(s.annotation.pinyin_tokens());
    tone.push_back(s.annotation.tone_tokens());
    chars.push_back(s.annotation.chars);
  }
  return {text::build_vocab(pinyin, min_count), text::build_vocab(tone, min_count),
          text::build_vocab(chars, min_count)};
}

void save_vocabularies(const text::Vocabularies& vocabs, const std::filesystem::path& dir) {
  vocabs.pinyin.save(dir / "vocab.pinyin");
  vocabs.tone.save(dir / "vocab.tone");
  vocabs.character.save(dir / "vocab.char");
}

text::Vocabularies load_vocabularies(const std::filesystem::path& dir) {
  return {text::Vocab::load(dir / "vocab.pinyin"), text::Vocab::load(dir / "vocab.tone"),
          text::Vocab::load(dir / "vocab.char")};
}

cascade::VocabSizes vocab_sizes(const text::Vocabularies& vocabs) {
  return {vocabs.pinyin.size(), vocabs.tone.size(), vocabs.character.size()};
}

EncodedSet encode_samples(std::span<const synth::SynthSample> data,
                          const text::Vocabularies& vocabs) {
  EncodedSet out;
  for (const auto& s : data) {
    try {
      out.samples.push_back({s.frames, text::encode_annotation(vocabs, s.annotation)});
    } catch (const VocabError&) {
      ++out.dropped;
    }
  }
  return out;
}

std::unique_ptr<cascade::LipReader> build_model(const RunConfig& config,
                                                cascade::VocabSizes vocab) {
  return cascade::make_model(config.mode, model_config(config), vocab,
                             derive_seed(config.seed, "model", 0));
}

}  // namespace lipcascade::app
