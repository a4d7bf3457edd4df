// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/layers/gru.hpp"

#include <cmath>
#include <string>

#include "lipcascade/error.hpp"
#include "lipcascade/numerics/ops.hpp"

namespace lipcascade::layers {

using namespace lipcascade::num;

GruCellParams GruCellParams::init(std::size_t input_dim, std::size_t hidden_dim,
                                  Rng& rng) {
  const double k = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  GruCellParams p;
  p.w_r = uniform_param({input_dim, hidden_dim}, k, rng);
  p.w_z = uniform_param({input_dim, hidden_dim}, k, rng);
  p.w_n = uniform_param({input_dim, hidden_dim}, k, rng);
  p.u_r = uniform_param({hidden_dim, hidden_dim}, k, rng);
  p.u_z = uniform_param({hidden_dim, hidden_dim}, k, rng);
  p.u_n = uniform_param({hidden_dim, hidden_dim}, k, rng);
  p.b_r = uniform_param({hidden_dim}, k, rng);
  p.b_z = uniform_param({hidden_dim}, k, rng);
  p.b_n = uniform_param({hidden_dim}, k, rng);
  return p;
}

void GruCellParams::collect(std::string_view prefix, ParamList& out) const {
  out.push_back({join_name(prefix, "w_r"), w_r});
  out.push_back({join_name(prefix, "w_z"), w_z});
  out.push_back({join_name(prefix, "w_n"), w_n});
  out.push_back({join_name(prefix, "u_r"), u_r});
  out.push_back({join_name(prefix, "u_z"), u_z});
  out.push_back({join_name(prefix, "u_n"), u_n});
  out.push_back({join_name(prefix, "b_r"), b_r});
  out.push_back({join_name(prefix, "b_z"), b_z});
  out.push_back({join_name(prefix, "b_n"), b_n});
}

Tensor gru_cell_step_projected(const GruCellParams& p, const Tensor& xr,
                               const Tensor& xz, const Tensor& xn, const Tensor& h) {
  if (h.rank() != 1 || h.dim(0) != p.hidden_dim()) {
    throw ShapeError("gru: hidden state " + to_string(h.shape()) +
                     " does not match cell size " + std::to_string(p.hidden_dim()));
  }
  const Tensor r = sigmoid(add(xr, matmul(h, p.u_r)));
  const Tensor z = sigmoid(add(xz, matmul(h, p.u_z)));
  const Tensor n = tanh(add(xn, mul(r, matmul(h, p.u_n))));
  // (1 - z) * n + z * h, written as n + z * (h - n)
  return add(n, mul(z, sub(h, n)));
}

Tensor gru_cell_step(const GruCellParams& p, const Tensor& x, const Tensor& h) {
  if (x.rank() != 1 || x.dim(0) != p.input_dim()) {
    throw ShapeError("gru: input " + to_string(x.shape()) +
                     " does not match input size " + std::to_string(p.input_dim()));
  }
  return gru_cell_step_projected(p, add(matmul(x, p.w_r), p.b_r),
                                 add(matmul(x, p.w_z), p.b_z),
                                 add(matmul(x, p.w_n), p.b_n), h);
}

GruInputProjection project_inputs(const GruCellParams& p, const Tensor& inputs) {
  if (inputs.rank() != 2 || inputs.dim(1) != p.input_dim()) {
    throw ShapeError("gru: sequence input " + to_string(inputs.shape()) +
                     " does not match input size " + std::to_string(p.input_dim()));
  }
  return {add_row_bias(matmul(inputs, p.w_r), p.b_r),
          add_row_bias(matmul(inputs, p.w_z), p.b_z),
          add_row_bias(matmul(inputs, p.w_n), p.b_n)};
}

BiGruEncoder BiGruEncoder::init(std::size_t input_dim, std::size_t cell_size,
                                std::size_t num_layers, Rng& rng) {
  BiGruEncoder enc;
  for (std::size_t l = 0; l < num_layers; ++l) {
    const std::size_t in = l == 0 ? input_dim : 2 * cell_size;
    BiGruLayer layer;
    layer.forward = GruCellParams::init(in, cell_size, rng);
    layer.backward = GruCellParams::init(in, cell_size, rng);
    enc.layers.push_back(std::move(layer));
  }
  return enc;
}

void BiGruEncoder::collect(std::string_view prefix, ParamList& out) const {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string base = join_name(prefix, "layer" + std::to_string(l));
    layers[l].forward.collect(join_name(base, "fwd"), out);
    layers[l].backward.collect(join_name(base, "bwd"), out);
  }
}

namespace {

std::vector<Tensor> run_direction(const GruCellParams& cell, const Tensor& inputs,
                                  bool reverse) {
  const std::size_t steps = inputs.dim(0);
  const GruInputProjection proj = project_inputs(cell, inputs);
  std::vector<Tensor> out(steps);
  Tensor h = Tensor::zeros({cell.hidden_dim()});
  for (std::size_t k = 0; k < steps; ++k) {
    const std::size_t t = reverse ? steps - 1 - k : k;
    h = gru_cell_step_projected(cell, row(proj.r, t), row(proj.z, t),
                                row(proj.n, t), h);
    out[t] = h;
  }
  return out;
}

}  // namespace

EncoderStates encoder_forward(const BiGruEncoder& encoder, const Tensor& inputs) {
  if (inputs.rank() != 2 || inputs.dim(0) == 0) {
    throw LengthError("encoder needs at least one timestep, got " +
                      (inputs.defined() ? to_string(inputs.shape()) : "undefined"));
  }
  Tensor layer_input = inputs;
  Tensor last_fwd, first_bwd;
  for (const auto& layer : encoder.layers) {
    const std::vector<Tensor> fwd = run_direction(layer.forward, layer_input, false);
    const std::vector<Tensor> bwd = run_direction(layer.backward, layer_input, true);
    std::vector<Tensor> rows;
    rows.reserve(fwd.size());
    for (std::size_t t = 0; t < fwd.size(); ++t) {
      const Tensor parts[] = {fwd[t], bwd[t]};
      rows.push_back(concat(parts));
    }
    layer_input = stack_rows(rows);
    last_fwd = fwd.back();
    first_bwd = bwd.front();
  }
  const Tensor parts[] = {last_fwd, first_bwd};
  return {layer_input, concat(parts)};
}

GruStack GruStack::init(std::size_t input_dim, std::size_t cell_size,
                        std::size_t num_layers, Rng& rng) {
  GruStack stack;
  for (std::size_t l = 0; l < num_layers; ++l) {
    stack.layers.push_back(
        GruCellParams::init(l == 0 ? input_dim : cell_size, cell_size, rng));
  }
  return stack;
}

void GruStack::collect(std::string_view prefix, ParamList& out) const {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    layers[l].collect(join_name(prefix, "layer" + std::to_string(l)), out);
  }
}

DecoderState decoder_step(const GruStack& stack, const DecoderState& state,
                          const Tensor& input) {
  if (state.hidden.size() != stack.layers.size()) {
    throw ShapeError("decoder state has " + std::to_string(state.hidden.size()) +
                     " layers, stack has " + std::to_string(stack.layers.size()));
  }
  DecoderState next;
  next.hidden.reserve(stack.layers.size());
  Tensor x = input;
  for (std::size_t l = 0; l < stack.layers.size(); ++l) {
    x = gru_cell_step(stack.layers[l], x, state.hidden[l]);
    next.hidden.push_back(x);
  }
  return next;
}

DecoderBridge DecoderBridge::init(std::size_t summary_dim, std::size_t cell_size,
                                  std::size_t num_layers, Rng& rng) {
  DecoderBridge bridge;
  for (std::size_t l = 0; l < num_layers; ++l) {
    bridge.per_layer.push_back(Linear::init(summary_dim, cell_size, rng));
  }
  return bridge;
}

DecoderState DecoderBridge::operator()(const Tensor& summary) const {
  DecoderState state;
  for (const auto& proj : per_layer) state.hidden.push_back(proj(summary));
  return state;
}

void DecoderBridge::collect(std::string_view prefix, ParamList& out) const {
  for (std::size_t l = 0; l < per_layer.size(); ++l) {
    per_layer[l].collect(join_name(prefix, "layer" + std::to_string(l)), out);
  }
}

}  // namespace lipcascade::layers
