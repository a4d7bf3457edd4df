// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "build.hpp"
#include "lipcascade/error.hpp"

namespace lipcascade::cascade {

BaselineModel::BaselineModel(const ModelConfig& config, VocabSizes vocab, std::uint64_t seed,
                             SpecialIds specials)
    : config_(config), vocab_(vocab), specials_(specials) {
  config_.validate();
  if (vocab.character == 0) throw ConfigError("character vocabulary size must be positive");
  Rng rng(seed, "model/baseline");
  frontend_ = detail_build::make_frontend(config_, rng);
  video_encoder_ = layers::BiGruEncoder::init(config_.feature_dim, config_.encoder_cell,
                                              config_.encoder_layers, rng);
  char_decoder_ =
      detail_build::make_decoder(config_, vocab.character, 2 * config_.encoder_cell, 1, rng);
}

num::ParamList BaselineModel::parameters() const {
  num::ParamList out;
  frontend_.collect("frontend", out);
  video_encoder_.collect("video_encoder", out);
  const std::string video_name[] = {"video"};
  char_decoder_.collect("char_decoder", video_name, out);
  return out;
}

layers::EncoderStates BaselineModel::encode_video(const VideoFrames& frames) const {
  return layers::encoder_forward(video_encoder_, layers::frame_features(frontend_, frames));
}

DecoderRun BaselineModel::forward(const VideoFrames& frames, const StepPolicy& policy) const {
  const layers::EncoderStates video = encode_video(frames);
  const layers::AttentionMemory memory[] = {
      layers::prepare_memory(char_decoder_.attentions[0], video)};
  return run_decoder(char_decoder_, memory, video.final_state, policy, specials_);
}

LossParts BaselineModel::training_loss(const Sample& sample, bool /*joint*/,
                                       double teacher_forcing, Rng& rng) const {
  const DecoderRun run =
      forward(sample.frames, StepPolicy::teacher(sample.targets.chars, teacher_forcing, &rng));
  LossParts parts;
  parts.character = num::nll_loss(run.stacked_log_probs(), sample.targets.chars, specials_.pad);
  parts.pinyin = Tensor::scalar(0.0);
  parts.tone = Tensor::scalar(0.0);
  parts.total = parts.character;
  return parts;
}

Decoded BaselineModel::decode(const VideoFrames& frames, std::size_t max_len) const {
  num::NoGradGuard no_grad;
  const DecoderRun run = forward(frames, StepPolicy::greedy(max_len));
  Decoded d;
  for (TokenId t : run.emitted) {
    if (t == specials_.eos) break;
    d.chars.push_back(t);
  }
  d.attention.push_back({"video->char", run.attention_map(0)});
  return d;
}

std::unique_ptr<LipReader> make_model(ModelKind kind, const ModelConfig& config,
                                      VocabSizes vocab, std::uint64_t seed) {
  switch (kind) {
    case ModelKind::CascadeFull:
      return std::make_unique<CascadeModel>(config, vocab, CascadeMode::Full, seed);
    case ModelKind::CascadeNoVideo:
      return std::make_unique<CascadeModel>(config, vocab, CascadeMode::NoVideo, seed);
    case ModelKind::BaselineWas:
      return std::make_unique<BaselineModel>(config, vocab, seed);
  }
  throw ConfigError("unknown model kind");
}

}  // namespace lipcascade::cascade
