// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/training/schedule.hpp"

#include <algorithm>

namespace lipcascade::training {

double PlateauSchedule::update(double epoch_loss) {
  if (epoch_loss < best) {
    best = epoch_loss;
    stale_epochs = 0;
    return lr;
  }
  if (++stale_epochs >= patience) {
    lr *= factor;
    stale_epochs = 0;
  }
  return lr;
}

std::vector<double> lr_trace(std::span<const double> losses, double initial_lr,
                             std::size_t patience, double factor) {
  PlateauSchedule schedule{initial_lr, patience, factor};
  std::vector<double> out;
  for (double loss : losses) {
    out.push_back(schedule.lr);
    schedule.update(loss);
  }
  return out;
}

double sampling_rate_at(std::size_t epoch, std::size_t max_epochs, double start, double end) {
  if (max_epochs <= 1) return start;
  const double frac = static_cast<double>(epoch) / static_cast<double>(max_epochs - 1);
  const double rate = start + (end - start) * frac;
  return std::clamp(rate, std::min(start, end), std::max(start, end));
}

std::size_t curriculum_stage(std::size_t epoch, std::size_t stage_epochs) {
  if (stage_epochs == 0) return text::kBucketCount - 1;
  return std::min<std::size_t>(text::kBucketCount - 1, epoch / stage_epochs);
}

std::vector<std::size_t> curriculum_pool(
    const std::array<std::vector<std::size_t>, text::kBucketCount>& buckets,
    std::size_t stage) {
  std::vector<std::size_t> pool;
  for (std::size_t b = 0; b <= stage && b < buckets.size(); ++b) {
    pool.insert(pool.end(), buckets[b].begin(), buckets[b].end());
  }
  return pool;
}

}  // namespace lipcascade::training
