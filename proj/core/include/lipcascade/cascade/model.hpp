// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lipcascade/cascade/decoder.hpp"
#include "lipcascade/frames.hpp"
#include "lipcascade/layers/frame_features.hpp"
#include "lipcascade/textproc/annotation.hpp"

namespace lipcascade::cascade {

struct ModelConfig {
  layers::FrontEnd front_end = layers::FrontEnd::Vector;
  std::size_t frame_dim = 24;  // vector front end input width
  std::size_t image_height = 64;
  std::size_t image_width = 128;
  std::size_t conv_channels = 16;
  std::size_t feature_dim = 512;
  std::size_t encoder_cell = 256;
  std::size_t decoder_cell = 512;
  std::size_t encoder_layers = 2;
  std::size_t decoder_layers = 2;
  std::size_t attention_dim = 128;
  std::size_t head_dim = 256;
  std::size_t embed_dim = 64;

  void validate() const;
};

struct VocabSizes {
  std::size_t pinyin = 0;
  std::size_t tone = 0;
  std::size_t character = 0;

  bool operator==(const VocabSizes&) const = default;
};

enum class CascadeMode { Full, NoVideo };

enum class ModelKind { CascadeFull, CascadeNoVideo, BaselineWas };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

/// Frames plus token ids; every target list ends with [eos].
struct Sample {
  VideoFrames frames;
  text::EncodedAnnotation targets;
};

struct AttentionMap {
  std::string name;  // "<encoder>-><decoder>", e.g. "video->pinyin"
  Tensor weights;    // [decoder steps, encoder steps]
};

struct CascadeOutput {
  Tensor pinyin_log_probs;  // [L, V_p]
  Tensor tone_log_probs;    // [L, V_t]
  Tensor char_log_probs;    // [L, V_c]
  Tensor pinyin_hiddens;    // [L, d_o]
  Tensor tone_hiddens;      // [L, d_o]
  std::vector<AttentionMap> attention;
};

struct LossParts {
  Tensor total;
  Tensor pinyin;
  Tensor tone;
  Tensor character;
};

struct Decoded {
  std::vector<TokenId> pinyin;
  std::vector<TokenId> tone;
  std::vector<TokenId> chars;
  std::vector<AttentionMap> attention;
};

/// Common surface of the cascade and the baseline, as seen by training and
/// evaluation. Baselines leave the pinyin/tone outputs empty.
class LipReader {
 public:
  virtual ~LipReader() = default;

  virtual ModelKind kind() const = 0;
  virtual const ModelConfig& config() const = 0;
  virtual VocabSizes vocab_sizes() const = 0;
  virtual num::ParamList parameters() const = 0;

  /// Builds the loss graph for one sample. `teacher_forcing` is the per-step
  /// probability of feeding the ground-truth previous token.
  virtual LossParts training_loss(const Sample& sample, bool joint,
                                  double teacher_forcing, Rng& rng) const = 0;

  virtual Decoded decode(const VideoFrames& frames, std::size_t max_len) const = 0;

  virtual bool predicts_pinyin() const { return false; }
};

class CascadeModel : public LipReader {
 public:
  CascadeModel(const ModelConfig& config, VocabSizes vocab, CascadeMode mode,
               std::uint64_t seed, SpecialIds specials = {});

  struct PinyinResult {
    DecoderRun run;
    layers::EncoderStates video;
  };
  struct ToneResult {
    DecoderRun run;
    layers::EncoderStates pinyin;
  };
  struct CharResult {
    DecoderRun run;
    layers::EncoderStates tone;
  };

  CascadeMode mode() const { return mode_; }
  ModelKind kind() const override;
  const ModelConfig& config() const override { return config_; }
  VocabSizes vocab_sizes() const override { return vocab_; }
  num::ParamList parameters() const override;
  bool predicts_pinyin() const override { return true; }

  layers::EncoderStates encode_video(const VideoFrames& frames) const;

  PinyinResult pinyin_subnet_forward(const VideoFrames& frames,
                                     const StepPolicy& policy) const;
  /// `video` is ignored in no_video mode and may be null there.
  ToneResult tone_subnet_forward(const layers::EncoderStates* video,
                                 const Tensor& pinyin_feed,
                                 const StepPolicy& policy) const;
  CharResult char_subnet_forward(const layers::EncoderStates* video,
                                 const layers::EncoderStates& pinyin,
                                 const Tensor& tone_feed, const StepPolicy& policy) const;

  /// Ground-truth token embeddings used as encoder input when the sub-networks
  /// are trained separately.
  Tensor pinyin_feed_from_tokens(std::span<const TokenId> ids) const;
  Tensor tone_feed_from_tokens(std::span<const TokenId> ids) const;

  CascadeOutput forward(const Sample& sample, bool joint, double teacher_forcing,
                        Rng& rng) const;

  LossParts training_loss(const Sample& sample, bool joint, double teacher_forcing,
                          Rng& rng) const override;

  Decoded decode(const VideoFrames& frames, std::size_t max_len) const override;

  /// Tone decoded freely from frames and ground-truth pinyin.
  std::vector<TokenId> decode_tone_given_pinyin(const VideoFrames& frames,
                                                std::span<const TokenId> pinyin,
                                                bool joint, std::size_t max_len) const;
  /// Characters decoded freely from frames and ground-truth pinyin and tone.
  std::vector<TokenId> decode_chars_given_pinyin_tone(const VideoFrames& frames,
                                                      std::span<const TokenId> pinyin,
                                                      std::span<const TokenId> tone,
                                                      bool joint,
                                                      std::size_t max_len) const;

 private:
  bool uses_video() const { return mode_ == CascadeMode::Full; }
  Tensor tone_summary(const layers::EncoderStates* video,
                      const layers::EncoderStates& pinyin) const;
  Tensor char_summary(const layers::EncoderStates* video,
                      const layers::EncoderStates& pinyin,
                      const layers::EncoderStates& tone) const;

  ModelConfig config_;
  VocabSizes vocab_;
  CascadeMode mode_;
  SpecialIds specials_;

  layers::FrameFeatureExtractor frontend_;
  layers::BiGruEncoder video_encoder_;
  AttentiveDecoder pinyin_decoder_;
  layers::BiGruEncoder pinyin_encoder_;
  AttentiveDecoder tone_decoder_;
  layers::BiGruEncoder tone_encoder_;
  AttentiveDecoder char_decoder_;
  Tensor pinyin_feed_embedding_;  // [V_p, d_o]
  Tensor tone_feed_embedding_;    // [V_t, d_o]
  std::vector<std::string> tone_attention_names_;
  std::vector<std::string> char_attention_names_;
};

/// Video-only attention seq2seq that emits characters directly.
class BaselineModel : public LipReader {
 public:
  BaselineModel(const ModelConfig& config, VocabSizes vocab, std::uint64_t seed,
                SpecialIds specials = {});

  ModelKind kind() const override { return ModelKind::BaselineWas; }
  const ModelConfig& config() const override { return config_; }
  VocabSizes vocab_sizes() const override { return vocab_; }
  num::ParamList parameters() const override;

  layers::EncoderStates encode_video(const VideoFrames& frames) const;
  DecoderRun forward(const VideoFrames& frames, const StepPolicy& policy) const;

  LossParts training_loss(const Sample& sample, bool joint, double teacher_forcing,
                          Rng& rng) const override;
  Decoded decode(const VideoFrames& frames, std::size_t max_len) const override;

 private:
  ModelConfig config_;
  VocabSizes vocab_;
  SpecialIds specials_;
  layers::FrameFeatureExtractor frontend_;
  layers::BiGruEncoder video_encoder_;
  AttentiveDecoder char_decoder_;
};

/// Pad-masked NLL per sub-network and their sum.
LossParts cascade_loss(const CascadeOutput& out, const text::EncodedAnnotation& targets,
                       TokenId pad_id);

std::unique_ptr<LipReader> make_model(ModelKind kind, const ModelConfig& config,
                                      VocabSizes vocab, std::uint64_t seed);

}  // namespace lipcascade::cascade
