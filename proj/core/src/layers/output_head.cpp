// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/layers/output_head.hpp"

#include <numeric>
#include <string>

#include "lipcascade/error.hpp"
#include "lipcascade/numerics/ops.hpp"

namespace lipcascade::layers {

using namespace lipcascade::num;

OutputHead OutputHead::init(std::size_t decoder_dim, std::vector<std::size_t> context_dims,
                            std::size_t hidden_dim, std::size_t vocab_size, Rng& rng) {
  const std::size_t in =
      std::accumulate(context_dims.begin(), context_dims.end(), decoder_dim);
  OutputHead head;
  head.hidden = Linear::init(in, hidden_dim, rng);
  head.logits = Linear::init(hidden_dim, vocab_size, rng);
  head.context_dims = std::move(context_dims);
  return head;
}

void OutputHead::collect(std::string_view prefix, ParamList& out) const {
  hidden.collect(join_name(prefix, "hidden"), out);
  logits.collect(join_name(prefix, "logits"), out);
}

HeadOutput output_head(const OutputHead& head, const Tensor& decoder_top,
                       std::span<const ContextVector> contexts) {
  if (contexts.size() != head.context_count()) {
    throw ConfigError("output head expects " + std::to_string(head.context_count()) +
                      " contexts, got " + std::to_string(contexts.size()));
  }
  std::vector<Tensor> parts;
  parts.reserve(contexts.size() + 1);
  parts.push_back(decoder_top);
  for (const auto& c : contexts) parts.push_back(c.values);
  const Tensor hidden = tanh(head.hidden(concat(parts)));
  return {hidden, log_softmax(head.logits(hidden))};
}

}  // namespace lipcascade::layers
