// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/layers/attention.hpp"

#include <cmath>

#include "lipcascade/error.hpp"
#include "lipcascade/numerics/ops.hpp"

namespace lipcascade::layers {

using namespace lipcascade::num;

AttentionParams AttentionParams::init(std::size_t decoder_dim, std::size_t encoder_dim,
                                      std::size_t attention_dim, Rng& rng) {
  AttentionParams p;
  p.w_dec = uniform_param({decoder_dim, attention_dim},
                          1.0 / std::sqrt(static_cast<double>(decoder_dim)), rng);
  p.w_enc = uniform_param({encoder_dim, attention_dim},
                          1.0 / std::sqrt(static_cast<double>(encoder_dim)), rng);
  p.v = uniform_param({attention_dim}, 1.0 / std::sqrt(static_cast<double>(attention_dim)),
                      rng);
  return p;
}

void AttentionParams::collect(std::string_view prefix, ParamList& out) const {
  out.push_back({join_name(prefix, "w_dec"), w_dec});
  out.push_back({join_name(prefix, "w_enc"), w_enc});
  out.push_back({join_name(prefix, "v"), v});
}

AttentionMemory prepare_memory(const AttentionParams& p, const EncoderStates& enc) {
  if (!enc.states.defined() || enc.states.rank() != 2 || enc.states.dim(0) == 0) {
    throw LengthError("attention over an empty encoder sequence");
  }
  return {enc.states, matmul(enc.states, p.w_enc)};
}

ContextVector attend(const AttentionParams& p, const Tensor& query,
                     const AttentionMemory& memory) {
  if (memory.states.dim(0) == 0) {
    throw LengthError("attention over an empty encoder sequence");
  }
  const Tensor energy = tanh(add_row_bias(memory.keys, matmul(query, p.w_dec)));
  const Tensor weights = softmax(matmul(energy, p.v));
  return {matmul(weights, memory.states), weights};
}

ContextVector attend(const AttentionParams& p, const Tensor& query,
                     const EncoderStates& enc) {
  return attend(p, query, prepare_memory(p, enc));
}

}  // namespace lipcascade::layers
