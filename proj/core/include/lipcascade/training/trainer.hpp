// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lipcascade/cascade/model.hpp"
#include "lipcascade/training/optimizer.hpp"

namespace lipcascade::training {

struct TrainConfig {
  double initial_lr = 1e-4;
  std::size_t patience = 4;
  double lr_factor = 0.5;
  double sampling_start = 0.7;
  double sampling_end = 1.0;
  /// When set, the scheduled rate is the probability of feeding the model's
  /// own previous output instead of the ground truth.
  bool sampling_inverse = false;
  std::size_t batch_size = 8;
  std::size_t max_epochs = 30;
  std::uint64_t seed = 1;
  bool curriculum = true;
  /// Epochs per curriculum stage; 0 picks max(1, max_epochs / 4).
  std::size_t stage_epochs = 0;
  bool joint = true;
  /// With joint training, the first epochs feed ground-truth token embeddings
  /// downstream before switching to head hiddens.
  std::size_t pretrain_epochs = 0;
  OptimizerKind optimizer = OptimizerKind::Adam;
  double clip_norm = 5.0;
  /// Maximum decode length for per-epoch validation.
  std::size_t eval_max_len = 40;
  std::size_t eval_threads = 1;

  void validate() const;
  std::size_t effective_stage_epochs() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double loss = 0.0;
  double loss_pinyin = 0.0;
  double loss_tone = 0.0;
  double loss_char = 0.0;
  double val_cer = 0.0;
  double val_per = 0.0;
  double val_ter = 0.0;
  double lr = 0.0;
  double sampling_rate = 0.0;
  std::size_t stage = 0;

  bool operator==(const EpochRecord&) const = default;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_val_cer = 0.0;

  /// One tab-separated line per epoch:
  /// epoch L L_p L_t L_c val_cer val_per val_ter lr rate stage
  std::string to_tsv() const;
};

struct TrainCallbacks {
  /// Called after every epoch with the model and optimizer in their final
  /// state for that epoch; `is_best` marks a new best validation CER.
  std::function<void(const EpochRecord&, const OptimizerState&, bool is_best)> on_epoch;
};

/// Checks that the model heads match the vocabulary sizes and that every
/// target id fits; throws ConfigError otherwise.
void check_vocabularies(const cascade::LipReader& model, cascade::VocabSizes vocab,
                        std::span<const cascade::Sample> data);

/// Loss of one sample scaled by 1/batch is backpropagated per sample; the
/// accumulated gradient is clipped and applied once per batch.
TrainHistory train(const cascade::LipReader& model, std::span<const cascade::Sample> train_set,
                   std::span<const cascade::Sample> val_set, cascade::VocabSizes vocab,
                   const TrainConfig& config, const TrainCallbacks& callbacks = {},
                   OptimizerState* resume = nullptr);

/// Mean loss parts over a dataset with pure teacher forcing; no gradients.
EpochRecord evaluate_loss(const cascade::LipReader& model, std::span<const cascade::Sample> data,
                          bool joint);

}  // namespace lipcascade::training
