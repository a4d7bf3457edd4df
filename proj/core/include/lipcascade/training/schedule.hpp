// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "lipcascade/textproc/annotation.hpp"

namespace lipcascade::training {

/// Halves the learning rate once the best training loss seen so far has not
/// improved for `patience` consecutive epochs; the counter then restarts.
struct PlateauSchedule {
  double lr = 1e-4;
  std::size_t patience = 4;
  double factor = 0.5;
  double best = std::numeric_limits<double>::infinity();
  std::size_t stale_epochs = 0;

  /// Feeds one epoch's training loss; returns the learning rate for the next
  /// epoch.
  double update(double epoch_loss);
};

/// Replays a loss sequence through a fresh schedule and returns the learning
/// rate used during each epoch (the first entry is always initial_lr).
std::vector<double> lr_trace(std::span<const double> losses, double initial_lr,
                             std::size_t patience = 4, double factor = 0.5);

/// Linear from `start` at epoch 0 to `end` at epoch max_epochs - 1, clamped to
/// the interval spanned by the endpoints.
double sampling_rate_at(std::size_t epoch, std::size_t max_epochs, double start = 0.7,
                        double end = 1.0);

/// Curriculum stage for an epoch: 0..3, advancing every stage_epochs epochs.
std::size_t curriculum_stage(std::size_t epoch, std::size_t stage_epochs);

/// Sample indices of all buckets <= stage, in bucket then index order.
std::vector<std::size_t> curriculum_pool(
    const std::array<std::vector<std::size_t>, text::kBucketCount>& buckets,
    std::size_t stage);

}  // namespace lipcascade::training
