// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "lipcascade/cascade/model.hpp"
#include "lipcascade/numerics/grad_check.hpp"

namespace lipcascade::app {

struct GradSuiteEntry {
  std::string name;
  num::GradCheckReport report;
};

struct GradSuiteOptions {
  num::GradCheckOptions check;
  std::size_t feature_steps = 4;  // encoder timesteps of the video stream
  std::size_t sentence_length = 2;
  cascade::VocabSizes vocab{7, 8, 9};
  /// When positive, whole-model checks run at parameters redrawn from
  /// U(-param_scale, param_scale) instead of the initialization. At the
  /// initialization, attention is close to uniform and many query-weight
  /// gradients fall below 1e-6, where central differences with eps 1e-5 are
  /// dominated by rounding (|a - n| stays near 1e-10).
  double param_scale = 0.5;
};

/// Gradient checks of every layer in isolation and of the joint cascade,
/// no_video cascade and baseline losses, using the dimensions in `config`.
/// Layer outputs are reduced to a scalar through a fixed random projection.
std::vector<GradSuiteEntry> run_grad_suite(const cascade::ModelConfig& config,
                                           std::uint64_t seed,
                                           const GradSuiteOptions& options = {});

}  // namespace lipcascade::app
