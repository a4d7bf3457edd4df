// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "lipcascade/app/run_config.hpp"
#include "lipcascade/cascade/model.hpp"
#include "lipcascade/synthdata/synth.hpp"
#include "lipcascade/textproc/annotation.hpp"

namespace lipcascade::app {

/// Pinyin, tone and character vocabularies from the training annotations.
text::Vocabularies build_vocabularies(std::span<const synth::SynthSample> train,
                                      std::size_t min_count);

/// Files vocab.pinyin, vocab.tone and vocab.char inside `dir`.
void save_vocabularies(const text::Vocabularies& vocabs, const std::filesystem::path& dir);
text::Vocabularies load_vocabularies(const std::filesystem::path& dir);

cascade::VocabSizes vocab_sizes(const text::Vocabularies& vocabs);

struct EncodedSet {
  std::vector<cascade::Sample> samples;
  /// Sentences skipped because a token fell below the vocabulary threshold.
  std::size_t dropped = 0;
};

EncodedSet encode_samples(std::span<const synth::SynthSample> data,
                          const text::Vocabularies& vocabs);

/// Model of the configured mode, initialized from a seed derived from run.seed.
std::unique_ptr<cascade::LipReader> build_model(const RunConfig& config,
                                                cascade::VocabSizes vocab);

}  // namespace lipcascade::app
