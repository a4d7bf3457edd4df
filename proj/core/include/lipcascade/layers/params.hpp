// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "lipcascade/numerics/grad_check.hpp"
#include "lipcascade/numerics/tensor.hpp"
#include "lipcascade/rng.hpp"

namespace lipcascade::layers {

using num::NamedTensor;
using num::ParamList;
using num::Tensor;

/// Trainable leaf with entries drawn from U(-bound, bound).
Tensor uniform_param(num::Shape shape, double bound, Rng& rng);
Tensor zero_param(num::Shape shape);

inline std::string join_name(std::string_view prefix, std::string_view leaf) {
  std::string out(prefix);
  out += '.';
  out += leaf;
  return out;
}

/// Affine map x W + b for a row vector [in] or a batch of rows [T,in].
struct Linear {
  Tensor weight;  // [in, out]
  Tensor bias;    // [out]

  static Linear init(std::size_t in, std::size_t out, Rng& rng);
  std::size_t in_dim() const { return weight.dim(0); }
  std::size_t out_dim() const { return weight.dim(1); }
  Tensor operator()(const Tensor& x) const;
  void collect(std::string_view prefix, ParamList& out) const;
};

}  // namespace lipcascade::layers
