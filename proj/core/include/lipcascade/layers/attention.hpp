// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "lipcascade/layers/gru.hpp"
#include "lipcascade/layers/params.hpp"

namespace lipcascade::layers {

/// Additive attention between one decoder and one encoder:
///   score_j = v . tanh(s W_dec + h_j W_enc)
struct AttentionParams {
  Tensor w_dec;  // [d_d, d_a]
  Tensor w_enc;  // [d_e, d_a]
  Tensor v;      // [d_a]

  static AttentionParams init(std::size_t decoder_dim, std::size_t encoder_dim,
                              std::size_t attention_dim, Rng& rng);
  void collect(std::string_view prefix, ParamList& out) const;
};

struct ContextVector {
  Tensor values;   // [d_e]
  Tensor weights;  // [T]
};

/// Encoder states with their key projection h_j W_enc cached; the keys do not
/// depend on the decoder step.
struct AttentionMemory {
  Tensor states;  // [T, d_e]
  Tensor keys;    // [T, d_a]
};

AttentionMemory prepare_memory(const AttentionParams& p, const EncoderStates& enc);

ContextVector attend(const AttentionParams& p, const Tensor& query,
                     const AttentionMemory& memory);
ContextVector attend(const AttentionParams& p, const Tensor& query,
                     const EncoderStates& enc);

}  // namespace lipcascade::layers
