// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lipcascade/numerics/grad_check.hpp"

namespace lipcascade::training {

using num::NamedTensor;
using num::ParamList;
using num::Tensor;

enum class OptimizerKind { Adam, Sgd };

std::string to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view text);

/// Moment buffers are aligned with the parameter list they were created for.
struct OptimizerState {
  OptimizerKind kind = OptimizerKind::Adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;

  static OptimizerState create(OptimizerKind kind, std::span<const NamedTensor> params);
  bool operator==(const OptimizerState&) const = default;
};

/// One update from the gradients currently stored on `params`. A parameter
/// that received no gradient is treated as having a zero gradient.
/// Throws NumericError naming the parameter when a gradient is not finite.
void optimizer_step(OptimizerState& state, std::span<const NamedTensor> params, double lr);

/// Rescales all gradients so their joint L2 norm is at most max_norm.
/// Returns the norm before clipping.
double clip_grad_norm(std::span<const NamedTensor> params, double max_norm);

void zero_grads(std::span<const NamedTensor> params);

}  // namespace lipcascade::training
