// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "lipcascade/layers/params.hpp"

namespace lipcascade::layers {

/// One GRU cell. The reset gate multiplies U_n h inside the candidate:
///   r  = sigmoid(x W_r + h U_r + b_r)
///   z  = sigmoid(x W_z + h U_z + b_z)
///   n  = tanh(x W_n + r * (h U_n) + b_n)
///   h' = (1 - z) * n + z * h
struct GruCellParams {
  Tensor w_r, w_z, w_n;  // [d_in, d_h]
  Tensor u_r, u_z, u_n;  // [d_h, d_h]
  Tensor b_r, b_z, b_n;  // [d_h]

  static GruCellParams init(std::size_t input_dim, std::size_t hidden_dim, Rng& rng);
  std::size_t input_dim() const { return w_r.dim(0); }
  std::size_t hidden_dim() const { return u_r.dim(0); }
  void collect(std::string_view prefix, ParamList& out) const;
};

Tensor gru_cell_step(const GruCellParams& p, const Tensor& x, const Tensor& h);

/// x W_* + b_* for every row of a [T, d_in] input, computed once per sequence.
struct GruInputProjection {
  Tensor r, z, n;  // [T, d_h]
};

GruInputProjection project_inputs(const GruCellParams& p, const Tensor& inputs);

/// Cell update given already-projected input rows.
Tensor gru_cell_step_projected(const GruCellParams& p, const Tensor& xr,
                               const Tensor& xz, const Tensor& xn, const Tensor& h);

struct BiGruLayer {
  GruCellParams forward;
  GruCellParams backward;
};

/// Stacked bidirectional GRU; layer k > 0 consumes layer k-1's concatenated
/// outputs.
struct BiGruEncoder {
  std::vector<BiGruLayer> layers;

  static BiGruEncoder init(std::size_t input_dim, std::size_t cell_size,
                           std::size_t num_layers, Rng& rng);
  std::size_t input_dim() const { return layers.front().forward.input_dim(); }
  std::size_t cell_size() const { return layers.front().forward.hidden_dim(); }
  std::size_t output_dim() const { return 2 * cell_size(); }
  void collect(std::string_view prefix, ParamList& out) const;
};

struct EncoderStates {
  Tensor states;       // [T, 2 * cell]
  Tensor final_state;  // [2 * cell]: last forward state ++ first backward state

  std::size_t length() const { return states.dim(0); }
};

EncoderStates encoder_forward(const BiGruEncoder& encoder, const Tensor& inputs);

/// Unidirectional stacked GRU used by every decoder.
struct GruStack {
  std::vector<GruCellParams> layers;

  static GruStack init(std::size_t input_dim, std::size_t cell_size,
                       std::size_t num_layers, Rng& rng);
  std::size_t cell_size() const { return layers.front().hidden_dim(); }
  void collect(std::string_view prefix, ParamList& out) const;
};

struct DecoderState {
  std::vector<Tensor> hidden;  // one [d_d] vector per layer

  const Tensor& top() const { return hidden.back(); }
};

DecoderState decoder_step(const GruStack& stack, const DecoderState& state,
                          const Tensor& input);

/// Maps an encoder summary to the initial decoder state, one projection per
/// decoder layer.
struct DecoderBridge {
  std::vector<Linear> per_layer;

  static DecoderBridge init(std::size_t summary_dim, std::size_t cell_size,
                            std::size_t num_layers, Rng& rng);
  DecoderState operator()(const Tensor& summary) const;
  void collect(std::string_view prefix, ParamList& out) const;
};

}  // namespace lipcascade::layers
