// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "build.hpp"
#include "lipcascade/error.hpp"

namespace lipcascade::cascade {

using layers::EncoderStates;

namespace {

std::vector<TokenId> strip_eos(const std::vector<TokenId>& emitted, TokenId eos) {
  std::vector<TokenId> out;
  for (TokenId t : emitted) {
    if (t == eos) break;
    out.push_back(t);
  }
  return out;
}

}  // namespace

void ModelConfig::validate() const {
  const std::pair<const char*, std::size_t> dims[] = {
      {"feature_dim", feature_dim},     {"enc_cell", encoder_cell},
      {"dec_cell", decoder_cell},       {"enc_layers", encoder_layers},
      {"dec_layers", decoder_layers},   {"attn_dim", attention_dim},
      {"head_dim", head_dim},           {"embed_dim", embed_dim},
      {"frame_dim", frame_dim},         {"conv_channels", conv_channels}};
  for (const auto& [name, value] : dims) {
    if (value == 0) throw ConfigError(std::string("model.") + name + " must be positive");
  }
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::CascadeFull: return "full";
    case ModelKind::CascadeNoVideo: return "no_video";
    case ModelKind::BaselineWas: return "baseline_was";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "full") return ModelKind::CascadeFull;
  if (text == "no_video") return ModelKind::CascadeNoVideo;
  if (text == "baseline_was") return ModelKind::BaselineWas;
  throw ConfigError("unknown model mode '" + std::string(text) +
                    "' (expected full, no_video or baseline_was)");
}

// Shared construction helpers, also used by the baseline.
namespace detail_build {

layers::FrameFeatureExtractor make_frontend(const ModelConfig& c, Rng& rng) {
  if (c.front_end == layers::FrontEnd::Image) {
    return layers::FrameFeatureExtractor::init_image(c.image_height, c.image_width,
                                                     c.conv_channels, c.feature_dim, rng);
  }
  return layers::FrameFeatureExtractor::init_vector(c.frame_dim, c.feature_dim, rng);
}

AttentiveDecoder make_decoder(const ModelConfig& c, std::size_t vocab,
                              std::size_t summary_dim, std::size_t attended, Rng& rng) {
  const std::size_t enc_out = 2 * c.encoder_cell;
  AttentiveDecoder d;
  d.embedding = layers::uniform_param({vocab, c.embed_dim},
                                      1.0 / std::sqrt(static_cast<double>(c.embed_dim)), rng);
  d.stack = layers::GruStack::init(c.embed_dim, c.decoder_cell, c.decoder_layers, rng);
  d.bridge = layers::DecoderBridge::init(summary_dim, c.decoder_cell, c.decoder_layers, rng);
  for (std::size_t a = 0; a < attended; ++a) {
    d.attentions.push_back(
        layers::AttentionParams::init(c.decoder_cell, enc_out, c.attention_dim, rng));
  }
  d.head = layers::OutputHead::init(c.decoder_cell, std::vector<std::size_t>(attended, enc_out),
                                    c.head_dim, vocab, rng);
  return d;
}

}  // namespace detail_build

CascadeModel::CascadeModel(const ModelConfig& config, VocabSizes vocab, CascadeMode mode,
                           std::uint64_t seed, SpecialIds specials)
    : config_(config), vocab_(vocab), mode_(mode), specials_(specials) {
  config_.validate();
  if (vocab.pinyin == 0 || vocab.tone == 0 || vocab.character == 0) {
    throw ConfigError("vocabulary sizes must be positive");
  }
  Rng rng(seed, "model/cascade");
  const std::size_t enc_out = 2 * config_.encoder_cell;
  const std::size_t video_sources = uses_video() ? 1 : 0;

  frontend_ = detail_build::make_frontend(config_, rng);
  video_encoder_ = layers::BiGruEncoder::init(config_.feature_dim, config_.encoder_cell,
                                              config_.encoder_layers, rng);
  pinyin_decoder_ = detail_build::make_decoder(config_, vocab.pinyin, enc_out, 1, rng);
  pinyin_encoder_ = layers::BiGruEncoder::init(config_.head_dim, config_.encoder_cell,
                                               config_.encoder_layers, rng);
  tone_decoder_ = detail_build::make_decoder(config_, vocab.tone, (video_sources + 1) * enc_out,
                                             video_sources + 1, rng);
  tone_encoder_ = layers::BiGruEncoder::init(config_.head_dim, config_.encoder_cell,
                                             config_.encoder_layers, rng);
  char_decoder_ = detail_build::make_decoder(
      config_, vocab.character, (video_sources + 2) * enc_out, video_sources + 2, rng);
  const double feed_bound = 1.0 / std::sqrt(static_cast<double>(config_.head_dim));
  pinyin_feed_embedding_ = layers::uniform_param({vocab.pinyin, config_.head_dim}, feed_bound, rng);
  tone_feed_embedding_ = layers::uniform_param({vocab.tone, config_.head_dim}, feed_bound, rng);

  if (uses_video()) {
    tone_attention_names_ = {"video", "pinyin"};
    char_attention_names_ = {"video", "pinyin", "tone"};
  } else {
    tone_attention_names_ = {"pinyin"};
    char_attention_names_ = {"pinyin", "tone"};
  }
}

ModelKind CascadeModel::kind() const {
  return uses_video() ? ModelKind::CascadeFull : ModelKind::CascadeNoVideo;
}

num::ParamList CascadeModel::parameters() const {
  num::ParamList out;
  frontend_.collect("frontend", out);
  video_encoder_.collect("video_encoder", out);
  const std::string video_name[] = {"video"};
  pinyin_decoder_.collect("pinyin_decoder", video_name, out);
  pinyin_encoder_.collect("pinyin_encoder", out);
  tone_decoder_.collect("tone_decoder", tone_attention_names_, out);
  tone_encoder_.collect("tone_encoder", out);
  char_decoder_.collect("char_decoder", char_attention_names_, out);
  out.push_back({"pinyin_feed_embedding", pinyin_feed_embedding_});
  out.push_back({"tone_feed_embedding", tone_feed_embedding_});
  return out;
}

EncoderStates CascadeModel::encode_video(const VideoFrames& frames) const {
  return layers::encoder_forward(video_encoder_, layers::frame_features(frontend_, frames));
}

CascadeModel::PinyinResult CascadeModel::pinyin_subnet_forward(
    const VideoFrames& frames, const StepPolicy& policy) const {
  PinyinResult result;
  result.video = encode_video(frames);
  const layers::AttentionMemory memory[] = {
      layers::prepare_memory(pinyin_decoder_.attentions[0], result.video)};
  result.run = run_decoder(pinyin_decoder_, memory, result.video.final_state, policy, specials_);
  return result;
}

Tensor CascadeModel::tone_summary(const EncoderStates* video,
                                  const EncoderStates& pinyin) const {
  if (!uses_video()) return pinyin.final_state;
  const Tensor parts[] = {video->final_state, pinyin.final_state};
  return num::concat(parts);
}

Tensor CascadeModel::char_summary(const EncoderStates* video, const EncoderStates& pinyin,
                                  const EncoderStates& tone) const {
  if (!uses_video()) {
    const Tensor parts[] = {pinyin.final_state, tone.final_state};
    return num::concat(parts);
  }
  const Tensor parts[] = {video->final_state, pinyin.final_state, tone.final_state};
  return num::concat(parts);
}

namespace {

void check_feed(const Tensor& feed, const StepPolicy& policy, const char* what) {
  if (feed.rank() != 2 || feed.dim(0) == 0) {
    throw LengthError(std::string(what) + " feed must be a non-empty [L, d] matrix, got " +
                      num::to_string(feed.shape()));
  }
  if (!policy.free_running() && feed.dim(0) != policy.targets.size()) {
    throw AlignmentError(std::string(what) + " feed has " + std::to_string(feed.dim(0)) +
                         " rows but there are " + std::to_string(policy.targets.size()) +
                         " targets");
  }
}

}  // namespace

CascadeModel::ToneResult CascadeModel::tone_subnet_forward(const EncoderStates* video,
                                                           const Tensor& pinyin_feed,
                                                           const StepPolicy& policy) const {
  if (uses_video() && video == nullptr) {
    throw ConfigError("full cascade tone sub-network needs video encoder states");
  }
  check_feed(pinyin_feed, policy, "pinyin");
  ToneResult result;
  result.pinyin = layers::encoder_forward(pinyin_encoder_, pinyin_feed);
  std::vector<layers::AttentionMemory> memories;
  std::size_t a = 0;
  if (uses_video()) memories.push_back(layers::prepare_memory(tone_decoder_.attentions[a++], *video));
  memories.push_back(layers::prepare_memory(tone_decoder_.attentions[a++], result.pinyin));
  result.run = run_decoder(tone_decoder_, memories, tone_summary(video, result.pinyin), policy,
                           specials_);
  return result;
}

CascadeModel::CharResult CascadeModel::char_subnet_forward(const EncoderStates* video,
                                                           const EncoderStates& pinyin,
                                                           const Tensor& tone_feed,
                                                           const StepPolicy& policy) const {
  if (uses_video() && video == nullptr) {
    throw ConfigError("full cascade character sub-network needs video encoder states");
  }
  check_feed(tone_feed, policy, "tone");
  CharResult result;
  result.tone = layers::encoder_forward(tone_encoder_, tone_feed);
  std::vector<layers::AttentionMemory> memories;
  std::size_t a = 0;
  if (uses_video()) memories.push_back(layers::prepare_memory(char_decoder_.attentions[a++], *video));
  memories.push_back(layers::prepare_memory(char_decoder_.attentions[a++], pinyin));
  memories.push_back(layers::prepare_memory(char_decoder_.attentions[a++], result.tone));
  result.run = run_decoder(char_decoder_, memories, char_summary(video, pinyin, result.tone),
                           policy, specials_);
  return result;
}

Tensor CascadeModel::pinyin_feed_from_tokens(std::span<const TokenId> ids) const {
  return num::gather_rows(pinyin_feed_embedding_, ids);
}

Tensor CascadeModel::tone_feed_from_tokens(std::span<const TokenId> ids) const {
  return num::gather_rows(tone_feed_embedding_, ids);
}

CascadeOutput CascadeModel::forward(const Sample& sample, bool joint, double teacher_forcing,
                                    Rng& rng) const {
  const auto& t = sample.targets;
  if (t.pinyin.size() != t.tone.size() || t.pinyin.size() != t.chars.size()) {
    throw AlignmentError("pinyin/tone/character targets have lengths " +
                         std::to_string(t.pinyin.size()) + "/" + std::to_string(t.tone.size()) +
                         "/" + std::to_string(t.chars.size()));
  }
  const PinyinResult p =
      pinyin_subnet_forward(sample.frames, StepPolicy::teacher(t.pinyin, teacher_forcing, &rng));
  const Tensor pinyin_feed = joint ? p.run.stacked_hiddens() : pinyin_feed_from_tokens(t.pinyin);
  const ToneResult tn = tone_subnet_forward(
      &p.video, pinyin_feed, StepPolicy::teacher(t.tone, teacher_forcing, &rng));
  const Tensor tone_feed = joint ? tn.run.stacked_hiddens() : tone_feed_from_tokens(t.tone);
  const CharResult c = char_subnet_forward(
      &p.video, tn.pinyin, tone_feed, StepPolicy::teacher(t.chars, teacher_forcing, &rng));

  CascadeOutput out;
  out.pinyin_log_probs = p.run.stacked_log_probs();
  out.tone_log_probs = tn.run.stacked_log_probs();
  out.char_log_probs = c.run.stacked_log_probs();
  out.pinyin_hiddens = p.run.stacked_hiddens();
  out.tone_hiddens = tn.run.stacked_hiddens();
  out.attention.push_back({"video->pinyin", p.run.attention_map(0)});
  for (std::size_t a = 0; a < tone_attention_names_.size(); ++a) {
    out.attention.push_back({tone_attention_names_[a] + "->tone", tn.run.attention_map(a)});
  }
  for (std::size_t a = 0; a < char_attention_names_.size(); ++a) {
    out.attention.push_back({char_attention_names_[a] + "->char", c.run.attention_map(a)});
  }
  return out;
}

LossParts cascade_loss(const CascadeOutput& out, const text::EncodedAnnotation& targets,
                       TokenId pad_id) {
  LossParts parts;
  parts.pinyin = num::nll_loss(out.pinyin_log_probs, targets.pinyin, pad_id);
  parts.tone = num::nll_loss(out.tone_log_probs, targets.tone, pad_id);
  parts.character = num::nll_loss(out.char_log_probs, targets.chars, pad_id);
  parts.total = num::add(num::add(parts.pinyin, parts.tone), parts.character);
  return parts;
}

LossParts CascadeModel::training_loss(const Sample& sample, bool joint, double teacher_forcing,
                                      Rng& rng) const {
  return cascade_loss(forward(sample, joint, teacher_forcing, rng), sample.targets,
                      specials_.pad);
}

Decoded CascadeModel::decode(const VideoFrames& frames, std::size_t max_len) const {
  num::NoGradGuard no_grad;
  const StepPolicy greedy = StepPolicy::greedy(max_len);
  const PinyinResult p = pinyin_subnet_forward(frames, greedy);
  const ToneResult tn = tone_subnet_forward(&p.video, p.run.stacked_hiddens(), greedy);
  const CharResult c = char_subnet_forward(&p.video, tn.pinyin, tn.run.stacked_hiddens(), greedy);

  Decoded d;
  d.pinyin = strip_eos(p.run.emitted, specials_.eos);
  d.tone = strip_eos(tn.run.emitted, specials_.eos);
  d.chars = strip_eos(c.run.emitted, specials_.eos);
  d.attention.push_back({"video->pinyin", p.run.attention_map(0)});
  for (std::size_t a = 0; a < tone_attention_names_.size(); ++a) {
    d.attention.push_back({tone_attention_names_[a] + "->tone", tn.run.attention_map(a)});
  }
  for (std::size_t a = 0; a < char_attention_names_.size(); ++a) {
    d.attention.push_back({char_attention_names_[a] + "->char", c.run.attention_map(a)});
  }
  return d;
}

std::vector<TokenId> CascadeModel::decode_tone_given_pinyin(const VideoFrames& frames,
                                                            std::span<const TokenId> pinyin,
                                                            bool joint,
                                                            std::size_t max_len) const {
  num::NoGradGuard no_grad;
  const PinyinResult p =
      pinyin_subnet_forward(frames, StepPolicy::teacher(pinyin, 1.0, nullptr));
  const Tensor feed = joint ? p.run.stacked_hiddens() : pinyin_feed_from_tokens(pinyin);
  const ToneResult tn = tone_subnet_forward(&p.video, feed, StepPolicy::greedy(max_len));
  return strip_eos(tn.run.emitted, specials_.eos);
}

std::vector<TokenId> CascadeModel::decode_chars_given_pinyin_tone(
    const VideoFrames& frames, std::span<const TokenId> pinyin, std::span<const TokenId> tone,
    bool joint, std::size_t max_len) const {
  num::NoGradGuard no_grad;
  const PinyinResult p =
      pinyin_subnet_forward(frames, StepPolicy::teacher(pinyin, 1.0, nullptr));
  const Tensor pinyin_feed = joint ? p.run.stacked_hiddens() : pinyin_feed_from_tokens(pinyin);
  const ToneResult tn =
      tone_subnet_forward(&p.video, pinyin_feed, StepPolicy::teacher(tone, 1.0, nullptr));
  const Tensor tone_feed = joint ? tn.run.stacked_hiddens() : tone_feed_from_tokens(tone);
  const CharResult c =
      char_subnet_forward(&p.video, tn.pinyin, tone_feed, StepPolicy::greedy(max_len));
  return strip_eos(c.run.emitted, specials_.eos);
}

}  // namespace lipcascade::cascade
