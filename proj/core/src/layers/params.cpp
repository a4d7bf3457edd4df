// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/layers/params.hpp"

#include <cmath>

#include "lipcascade/error.hpp"
#include "lipcascade/numerics/ops.hpp"

namespace lipcascade::layers {

Tensor uniform_param(num::Shape shape, double bound, Rng& rng) {
  Tensor t = Tensor::zeros(std::move(shape), true);
  for (double& v : t.data()) v = rng.uniform(-bound, bound);
  return t;
}

Tensor zero_param(num::Shape shape) { return Tensor::zeros(std::move(shape), true); }

Linear Linear::init(std::size_t in, std::size_t out, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  return Linear{uniform_param({in, out}, bound, rng), uniform_param({out}, bound, rng)};
}

Tensor Linear::operator()(const Tensor& x) const {
  Tensor y = num::matmul(x, weight);
  return y.rank() == 1 ? num::add(y, bias) : num::add_row_bias(y, bias);
}

void Linear::collect(std::string_view prefix, ParamList& out) const {
  out.push_back({join_name(prefix, "weight"), weight});
  out.push_back({join_name(prefix, "bias"), bias});
}

}  // namespace lipcascade::layers
