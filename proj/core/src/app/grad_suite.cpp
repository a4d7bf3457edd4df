// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/app/grad_suite.hpp"

#include "lipcascade/layers/attention.hpp"
#include "lipcascade/layers/frame_features.hpp"
#include "lipcascade/layers/gru.hpp"
#include "lipcascade/layers/output_head.hpp"

namespace lipcascade::app {
namespace {

using num::Tensor;

Tensor random_tensor(num::Shape shape, Rng& rng, bool requires_grad) {
  std::vector<double> v(num::numel(shape));
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return Tensor::from(std::move(shape), std::move(v), requires_grad);
}

// sum(out * R) for a fixed random R of the same shape.
class Probe {
 public:
  Probe(const num::Shape& shape, Rng& rng) : weights_(random_tensor(shape, rng, false)) {}
  Tensor operator()(const Tensor& out) const { return num::sum(num::mul(out, weights_)); }

 private:
  Tensor weights_;
};

VideoFrames random_frames(std::size_t count, std::size_t dim, Rng& rng) {
  VideoFrames f{count, dim, std::vector<float>(count * dim)};
  for (auto& x : f.data) x = static_cast<float>(rng.uniform(-1.0, 1.0));
  return f;
}

cascade::Sample random_sample(const cascade::ModelConfig& c, const GradSuiteOptions& o, Rng& rng) {
  const std::size_t frames = layers::kFrameWindow + layers::kFrameStride * (o.feature_steps - 1);
  const std::size_t dim = c.front_end == layers::FrontEnd::Image ? c.image_height * c.image_width
                                                                 : c.frame_dim;
  cascade::Sample s;
  s.frames = random_frames(frames, dim, rng);
  auto ids = [&](std::size_t vocab) {
    std::vector<num::TokenId> out;
    for (std::size_t i = 0; i < o.sentence_length; ++i) {
      out.push_back(static_cast<num::TokenId>(3 + rng.uniform_index(vocab - 3)));
    }
    out.push_back(1);  // [eos]
    return out;
  };
  s.targets = {ids(o.vocab.pinyin), ids(o.vocab.tone), ids(o.vocab.character)};
  return s;
}

}  // namespace

std::vector<GradSuiteEntry> run_grad_suite(const cascade::ModelConfig& config,
                                           std::uint64_t seed, const GradSuiteOptions& options) {
  std::vector<GradSuiteEntry> out;
  Rng rng(seed, "grad-suite");
  const auto& c = config;
  const std::size_t enc_out = 2 * c.encoder_cell;
  const std::size_t steps = options.feature_steps;
  auto check = [&](std::string name, const std::function<Tensor()>& loss,
                   const num::ParamList& params) {
    out.push_back({std::move(name), num::grad_check(loss, params, options.check)});
  };

  {
    const layers::Linear lin = layers::Linear::init(c.feature_dim, c.attention_dim, rng);
    const Tensor x = random_tensor({steps, c.feature_dim}, rng, true);
    const Probe probe({steps, c.attention_dim}, rng);
    num::ParamList params{{"x", x}};
    lin.collect("linear", params);
    check("linear", [&] { return probe(num::tanh(lin(x))); }, params);
  }
  {
    const auto cell = layers::GruCellParams::init(c.feature_dim, c.encoder_cell, rng);
    const Tensor x = random_tensor({c.feature_dim}, rng, true);
    const Tensor h = random_tensor({c.encoder_cell}, rng, true);
    const Probe probe({c.encoder_cell}, rng);
    num::ParamList params{{"x", x}, {"h", h}};
    cell.collect("gru_cell", params);
    check("gru_cell", [&] { return probe(layers::gru_cell_step(cell, x, h)); }, params);
  }
  {
    const auto enc = layers::BiGruEncoder::init(c.feature_dim, c.encoder_cell, c.encoder_layers, rng);
    const Tensor x = random_tensor({steps, c.feature_dim}, rng, true);
    const Probe probe_states({steps, enc_out}, rng);
    const Probe probe_final({enc_out}, rng);
    num::ParamList params{{"inputs", x}};
    enc.collect("bigru_encoder", params);
    check("bigru_encoder", [&] {
      const auto states = layers::encoder_forward(enc, x);
      return num::add(probe_states(states.states), probe_final(states.final_state));
    }, params);
  }
  {
    const auto stack = layers::GruStack::init(c.embed_dim, c.decoder_cell, c.decoder_layers, rng);
    const auto bridge = layers::DecoderBridge::init(enc_out, c.decoder_cell, c.decoder_layers, rng);
    const Tensor summary = random_tensor({enc_out}, rng, true);
    const Tensor x1 = random_tensor({c.embed_dim}, rng, true);
    const Tensor x2 = random_tensor({c.embed_dim}, rng, true);
    const Probe probe({c.decoder_cell}, rng);
    num::ParamList params{{"summary", summary}, {"x1", x1}, {"x2", x2}};
    stack.collect("decoder_gru", params);
    bridge.collect("bridge", params);
    check("decoder_gru_stack", [&] {
      auto state = layers::decoder_step(stack, bridge(summary), x1);
      state = layers::decoder_step(stack, state, x2);
      return probe(state.top());
    }, params);
  }
  {
    const auto att = layers::AttentionParams::init(c.decoder_cell, enc_out, c.attention_dim, rng);
    const layers::EncoderStates enc{random_tensor({steps, enc_out}, rng, true),
                                    random_tensor({enc_out}, rng, false)};
    const Tensor query = random_tensor({c.decoder_cell}, rng, true);
    const Probe probe_ctx({enc_out}, rng);
    const Probe probe_w({steps}, rng);
    num::ParamList params{{"query", query}, {"states", enc.states}};
    att.collect("attention", params);
    check("attention", [&] {
      const auto ctx = layers::attend(att, query, enc);
      return num::add(probe_ctx(ctx.values), probe_w(ctx.weights));
    }, params);
  }
  {
    const auto head = layers::OutputHead::init(c.decoder_cell, {enc_out, enc_out}, c.head_dim,
                                               options.vocab.character, rng);
    const Tensor top = random_tensor({c.decoder_cell}, rng, true);
    const Tensor c1 = random_tensor({enc_out}, rng, true);
    const Tensor c2 = random_tensor({enc_out}, rng, true);
    const Probe probe_h({c.head_dim}, rng);
    const Probe probe_lp({options.vocab.character}, rng);
    num::ParamList params{{"decoder_top", top}, {"context0", c1}, {"context1", c2}};
    head.collect("output_head", params);
    check("output_head", [&] {
      const layers::ContextVector ctx[] = {{c1, Tensor()}, {c2, Tensor()}};
      const auto o = layers::output_head(head, top, ctx);
      return num::add(probe_h(o.hidden), probe_lp(o.log_probs));
    }, params);
  }
  {
    const auto fx = layers::FrameFeatureExtractor::init_vector(c.frame_dim, c.feature_dim, rng);
    const VideoFrames frames = random_frames(layers::kFrameWindow + 2 * (steps - 1), c.frame_dim, rng);
    const Probe probe({steps, c.feature_dim}, rng);
    num::ParamList params;
    fx.collect("frontend_vector", params);
    check("frontend_vector", [&] { return probe(layers::frame_features(fx, frames)); }, params);
  }
  {
    const std::size_t h = 9, w = 11, channels = 3;
    const auto fx = layers::FrameFeatureExtractor::init_image(h, w, channels, c.feature_dim, rng);
    const VideoFrames frames = random_frames(layers::kFrameWindow + 2, h * w, rng);
    const Probe probe({2, c.feature_dim}, rng);
    num::ParamList params;
    fx.collect("frontend_image", params);
    check("frontend_image", [&] { return probe(layers::frame_features(fx, frames)); }, params);
  }
  {
    const Tensor logits = random_tensor({3, options.vocab.tone}, rng, true);
    const std::vector<num::TokenId> targets{4, 2, 5};
    check("log_softmax_nll", [&] { return num::nll_loss(num::log_softmax(logits), targets, 2); },
          {{"logits", logits}});
  }

  cascade::ModelConfig vec = c;
  vec.front_end = layers::FrontEnd::Vector;
  const cascade::Sample sample = random_sample(vec, options, rng);
  const struct {
    const char* name;
    cascade::ModelKind kind;
    bool joint;
  } models[] = {{"cascade_full_joint", cascade::ModelKind::CascadeFull, true},
                {"cascade_full_separate", cascade::ModelKind::CascadeFull, false},
                {"cascade_no_video_joint", cascade::ModelKind::CascadeNoVideo, true},
                {"baseline_was", cascade::ModelKind::BaselineWas, true}};
  for (const auto& m : models) {
    const auto model = cascade::make_model(m.kind, vec, options.vocab, derive_seed(seed, m.name));
    if (options.param_scale > 0.0) {
      Rng redraw(seed, m.name);
      for (auto& p : model->parameters()) {
        for (double& v : p.tensor.data()) v = redraw.uniform(-options.param_scale, options.param_scale);
      }
    }
    Rng unused(0);
    check(m.name, [&] { return model->training_loss(sample, m.joint, 1.0, unused).total; },
          model->parameters());
  }
  return out;
}

}  // namespace lipcascade::app
