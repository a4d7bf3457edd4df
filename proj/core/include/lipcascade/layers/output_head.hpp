// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "lipcascade/layers/attention.hpp"
#include "lipcascade/layers/gru.hpp"
#include "lipcascade/layers/params.hpp"

namespace lipcascade::layers {

/// Fuses the decoder's top state with 1-3 attention contexts:
///   hidden    = tanh([s; c_1; ...; c_k] W_1 + b_1)
///   log_probs = log_softmax(hidden W_2 + b_2)
/// The hidden vector is part of the output because the joint cascade feeds it
/// to the next encoder.
struct OutputHead {
  Linear hidden;
  Linear logits;
  std::vector<std::size_t> context_dims;

  static OutputHead init(std::size_t decoder_dim, std::vector<std::size_t> context_dims,
                         std::size_t hidden_dim, std::size_t vocab_size, Rng& rng);
  std::size_t context_count() const { return context_dims.size(); }
  std::size_t hidden_dim() const { return hidden.out_dim(); }
  std::size_t vocab_size() const { return logits.out_dim(); }
  void collect(std::string_view prefix, ParamList& out) const;
};

struct HeadOutput {
  Tensor hidden;     // [d_o]
  Tensor log_probs;  // [V]
};

HeadOutput output_head(const OutputHead& head, const Tensor& decoder_top,
                       std::span<const ContextVector> contexts);

inline HeadOutput output_head(const OutputHead& head, const DecoderState& dec,
                              std::span<const ContextVector> contexts) {
  return output_head(head, dec.top(), contexts);
}

}  // namespace lipcascade::layers
