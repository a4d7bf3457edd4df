// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/training/optimizer.hpp"

#include <cmath>

#include "lipcascade/error.hpp"

namespace lipcascade::training {

std::string to_string(OptimizerKind kind) {
  return kind == OptimizerKind::Adam ? "adam" : "sgd";
}

OptimizerKind parse_optimizer_kind(std::string_view text) {
  if (text == "adam") return OptimizerKind::Adam;
  if (text == "sgd") return OptimizerKind::Sgd;
  throw ConfigError("unknown optimizer '" + std::string(text) + "' (expected adam or sgd)");
}

OptimizerState OptimizerState::create(OptimizerKind kind, std::span<const NamedTensor> params) {
  OptimizerState s;
  s.kind = kind;
  if (kind == OptimizerKind::Adam) {
    for (const auto& p : params) {
      s.m.emplace_back(p.tensor.numel(), 0.0);
      s.v.emplace_back(p.tensor.numel(), 0.0);
    }
  }
  return s;
}

void optimizer_step(OptimizerState& state, std::span<const NamedTensor> params, double lr) {
  if (state.kind == OptimizerKind::Adam && state.m.size() != params.size()) {
    throw ShapeError("optimizer holds moments for " + std::to_string(state.m.size()) +
                     " parameters, got " + std::to_string(params.size()));
  }
  for (const auto& p : params) {
    for (double g : p.tensor.grad()) {
      if (!std::isfinite(g)) throw NumericError("non-finite gradient for " + p.name);
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor param = params[k].tensor;
    auto values = param.data();
    const auto grad = param.grad();
    if (state.kind == OptimizerKind::Sgd) {
      for (std::size_t i = 0; i < grad.size(); ++i) values[i] -= lr * grad[i];
      continue;
    }
    auto& m = state.m[k];
    auto& v = state.v[k];
    if (m.size() != values.size()) {
      throw ShapeError("moment buffer size mismatch for " + params[k].name);
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double g = grad.empty() ? 0.0 : grad[i];
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      values[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

double clip_grad_norm(std::span<const NamedTensor> params, double max_norm) {
  double sq = 0.0;
  for (const auto& p : params) {
    for (double g : p.tensor.grad()) sq += g * g;
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double factor = max_norm / norm;
    for (const auto& p : params) {
      Tensor t = p.tensor;
      if (!t.has_grad()) continue;
      for (double& g : t.mutable_grad()) g *= factor;
    }
  }
  return norm;
}

void zero_grads(std::span<const NamedTensor> params) {
  for (const auto& p : params) {
    Tensor t = p.tensor;
    t.zero_grad();
  }
}

}  // namespace lipcascade::training
