// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "lipcascade/layers/attention.hpp"
#include "lipcascade/layers/gru.hpp"
#include "lipcascade/layers/output_head.hpp"
#include "lipcascade/numerics/ops.hpp"
#include "lipcascade/rng.hpp"

namespace lipcascade::cascade {

using num::Tensor;
using num::TokenId;

struct SpecialIds {
  TokenId sos = 0;
  TokenId eos = 1;
  TokenId pad = 2;
};

/// How the previous-token input is chosen at each decoder step.
///
/// Teacher mode runs exactly targets.size() steps; at step i > 0 the input is
/// targets[i-1] with probability `teacher_forcing`, otherwise the model's own
/// argmax from step i-1 (one independent draw per step). Greedy mode feeds
/// back argmaxes until [eos] or max_len steps.
struct StepPolicy {
  std::span<const TokenId> targets;
  double teacher_forcing = 1.0;
  Rng* rng = nullptr;
  std::size_t max_len = 0;
  bool greedy_mode = false;

  bool free_running() const { return greedy_mode; }

  static StepPolicy teacher(std::span<const TokenId> targets, double probability, Rng* rng) {
    return {targets, probability, rng, 0, false};
  }
  static StepPolicy greedy(std::size_t max_len) { return {{}, 0.0, nullptr, max_len, true}; }
};

/// A GRU decoder with its token embedding, initial-state bridge, one additive
/// attention per attended encoder, and the fusing output head.
struct AttentiveDecoder {
  Tensor embedding;  // [V, d_emb]
  layers::GruStack stack;
  layers::DecoderBridge bridge;
  std::vector<layers::AttentionParams> attentions;
  layers::OutputHead head;

  void collect(std::string_view prefix, std::span<const std::string> attention_names,
               num::ParamList& out) const;
};

struct DecoderRun {
  std::vector<Tensor> log_probs;             // per step, [V]
  std::vector<Tensor> hiddens;               // per step, [d_o]
  std::vector<std::vector<Tensor>> weights;  // per attention, per step, [T]
  std::vector<TokenId> emitted;              // argmax per step
  std::vector<TokenId> inputs;               // token fed at each step

  std::size_t steps() const { return log_probs.size(); }
  Tensor stacked_log_probs() const;
  Tensor stacked_hiddens() const;
  Tensor attention_map(std::size_t which) const;
};

DecoderRun run_decoder(const AttentiveDecoder& decoder,
                       std::span<const layers::AttentionMemory> memories,
                       const Tensor& summary, const StepPolicy& policy,
                       const SpecialIds& specials);

}  // namespace lipcascade::cascade
