// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/cascade/decoder.hpp"

#include "lipcascade/error.hpp"

namespace lipcascade::cascade {

using layers::join_name;

void AttentiveDecoder::collect(std::string_view prefix,
                               std::span<const std::string> attention_names,
                               num::ParamList& out) const {
  out.push_back({join_name(prefix, "embedding"), embedding});
  stack.collect(join_name(prefix, "gru"), out);
  bridge.collect(join_name(prefix, "bridge"), out);
  for (std::size_t a = 0; a < attentions.size(); ++a) {
    attentions[a].collect(join_name(prefix, "attention." + attention_names[a]), out);
  }
  head.collect(join_name(prefix, "head"), out);
}

Tensor DecoderRun::stacked_log_probs() const {
  return num::stack_rows(log_probs);
}

Tensor DecoderRun::stacked_hiddens() const { return num::stack_rows(hiddens); }

Tensor DecoderRun::attention_map(std::size_t which) const {
  return num::stack_rows(weights.at(which));
}

DecoderRun run_decoder(const AttentiveDecoder& decoder,
                       std::span<const layers::AttentionMemory> memories,
                       const Tensor& summary, const StepPolicy& policy,
                       const SpecialIds& specials) {
  if (memories.size() != decoder.attentions.size()) {
    throw ConfigError("decoder has " + std::to_string(decoder.attentions.size()) +
                      " attentions but received " + std::to_string(memories.size()) +
                      " encoder memories");
  }
  const bool greedy = policy.free_running();
  if (greedy && policy.max_len == 0) throw LengthError("max_len must be at least 1");
  if (!greedy && policy.targets.empty()) throw LengthError("empty target sequence");
  if (!greedy && policy.teacher_forcing < 1.0 && policy.teacher_forcing > 0.0 &&
      policy.rng == nullptr) {
    throw ConfigError("scheduled sampling needs an rng");
  }
  const std::size_t limit = greedy ? policy.max_len : policy.targets.size();
  const std::size_t embed_dim = decoder.embedding.dim(1);

  DecoderRun run;
  run.weights.resize(memories.size());
  layers::DecoderState state = decoder.bridge(summary);
  std::vector<layers::ContextVector> contexts(memories.size());
  TokenId input = specials.sos;
  for (std::size_t step = 0; step < limit; ++step) {
    if (step > 0) {
      if (greedy) {
        input = run.emitted.back();
      } else {
        const double p = policy.teacher_forcing;
        bool use_truth = p >= 1.0;
        if (p > 0.0 && p < 1.0) use_truth = policy.rng->bernoulli(p);
        input = use_truth ? policy.targets[step - 1] : run.emitted.back();
      }
    }
    run.inputs.push_back(input);
    const TokenId ids[] = {input};
    const Tensor x = num::reshape(num::gather_rows(decoder.embedding, ids), {embed_dim});
    state = layers::decoder_step(decoder.stack, state, x);
    for (std::size_t a = 0; a < memories.size(); ++a) {
      contexts[a] = layers::attend(decoder.attentions[a], state.top(), memories[a]);
      run.weights[a].push_back(contexts[a].weights);
    }
    layers::HeadOutput out = layers::output_head(decoder.head, state, contexts);
    const auto token = static_cast<TokenId>(num::argmax(out.log_probs.data()));
    run.emitted.push_back(token);
    run.log_probs.push_back(std::move(out.log_probs));
    run.hiddens.push_back(std::move(out.hidden));
    if (greedy && token == specials.eos) break;
  }
  return run;
}

}  // namespace lipcascade::cascade
