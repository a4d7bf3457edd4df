// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lipcascade/numerics/tensor.hpp"

namespace lipcascade::num {

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

using ParamList = std::vector<NamedTensor>;

struct GradCheckOptions {
  double eps = 1e-5;
  double tol = 1e-4;
  /// Coordinates checked per parameter tensor; larger tensors are subsampled.
  std::size_t max_coords = 64;
  std::uint64_t seed = 0;
};

struct ParamGradError {
  std::string name;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;  // max |a - n|
  std::size_t coords_checked = 0;
  std::size_t coords_failed = 0;
  double max_failed_grad = 0.0;  // largest |a| among coordinates above tol
};

struct GradCheckReport {
  std::vector<ParamGradError> params;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t coords_checked = 0;
  std::size_t coords_failed = 0;
  double max_failed_grad = 0.0;
  bool pass = false;
  double eps = 0.0;
  double tol = 0.0;
};

/// |a - n| / max(1e-8, |a| + |n|)
double relative_error(double analytic, double numeric);

/// Compares autodiff gradients of loss_fn with central differences.
/// loss_fn must rebuild its graph on every call and be deterministic.
GradCheckReport grad_check(const std::function<Tensor()>& loss_fn,
                           std::span<const NamedTensor> params,
                           const GradCheckOptions& options = {});

/// Same, but the analytic gradients are supplied by the caller (one buffer
/// per parameter). Used to feed deliberately corrupted gradients in tests.
GradCheckReport grad_check_against(const std::function<Tensor()>& loss_fn,
                                   std::span<const NamedTensor> params,
                                   std::span<const std::vector<double>> analytic,
                                   const GradCheckOptions& options = {});

}  // namespace lipcascade::num
