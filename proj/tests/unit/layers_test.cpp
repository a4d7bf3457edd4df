// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "lipcascade/app/grad_suite.hpp"
#include "lipcascade/error.hpp"
#include "lipcascade/layers/attention.hpp"
#include "lipcascade/layers/frame_features.hpp"
#include "lipcascade/layers/gru.hpp"
#include "lipcascade/layers/output_head.hpp"
#include "lipcascade/numerics/ops.hpp"

namespace lipcascade::layers {
namespace {

using num::Shape;

Tensor random(Shape shape, Rng& rng) {
  std::vector<double> v(num::numel(shape));
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return Tensor::from(std::move(shape), std::move(v));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// x·W + b for row-major W [in, out], column j.
double affine(const Tensor& x, const Tensor& w, const Tensor& b, std::size_t j) {
  double s = b.at(j);
  for (std::size_t i = 0; i < x.numel(); ++i) s += x.at(i) * w.at(i, j);
  return s;
}

struct ScalarGru {
  std::vector<double> h, n;
};

// Reference cell: r, z gates; reset applied to U_n·h inside the candidate.
ScalarGru scalar_gru(const GruCellParams& p, const Tensor& x, const Tensor& h) {
  const std::size_t d = p.hidden_dim();
  ScalarGru out{std::vector<double>(d), std::vector<double>(d)};
  for (std::size_t j = 0; j < d; ++j) {
    const double r = sigmoid(affine(x, p.w_r, p.b_r, j) + affine(h, p.u_r, Tensor::zeros({d}), j));
    const double z = sigmoid(affine(x, p.w_z, p.b_z, j) + affine(h, p.u_z, Tensor::zeros({d}), j));
    const double n = std::tanh(affine(x, p.w_n, p.b_n, j) +
                               r * affine(h, p.u_n, Tensor::zeros({d}), j));
    out.n[j] = n;
    out.h[j] = (1.0 - z) * n + z * h.at(j);
  }
  return out;
}

TEST(Gru, MatchesScalarReference) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = GruCellParams::init(3 + trial % 3, 5, rng);
    const Tensor x = random({p.input_dim()}, rng);
    const Tensor h = random({5}, rng);
    const Tensor got = gru_cell_step(p, x, h);
    const ScalarGru want = scalar_gru(p, x, h);
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_NEAR(got.at(j), want.h[j], 1e-12);
      // h' is a convex combination of n and h.
      EXPECT_GE(got.at(j), std::min(want.n[j], h.at(j)) - 1e-12);
      EXPECT_LE(got.at(j), std::max(want.n[j], h.at(j)) + 1e-12);
    }
  }
}

TEST(Gru, RejectsWrongInputSize) {
  Rng rng(1);
  const auto p = GruCellParams::init(3, 4, rng);
  EXPECT_THROW(gru_cell_step(p, Tensor::zeros({2}), Tensor::zeros({4})), ShapeError);
}

TEST(Encoder, SingleLayerMatchesUnrolledCells) {
  Rng rng(8);
  const auto enc = BiGruEncoder::init(3, 4, 1, rng);
  const std::size_t steps = 5;
  const Tensor inputs = random({steps, 3}, rng);
  const EncoderStates out = encoder_forward(enc, inputs);
  ASSERT_EQ(out.states.shape(), (Shape{steps, 8}));
  ASSERT_EQ(out.final_state.shape(), (Shape{8}));

  std::vector<Tensor> fwd(steps), bwd(steps);
  Tensor h = Tensor::zeros({4});
  for (std::size_t t = 0; t < steps; ++t) fwd[t] = h = gru_cell_step(enc.layers[0].forward, num::row(inputs, t), h);
  h = Tensor::zeros({4});
  for (std::size_t t = steps; t-- > 0;) bwd[t] = h = gru_cell_step(enc.layers[0].backward, num::row(inputs, t), h);
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_NEAR(out.states.at(t, j), fwd[t].at(j), 1e-12);
      EXPECT_NEAR(out.states.at(t, 4 + j), bwd[t].at(j), 1e-12);
    }
  }
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(out.final_state.at(j), fwd[steps - 1].at(j), 1e-12);
    EXPECT_NEAR(out.final_state.at(4 + j), bwd[0].at(j), 1e-12);
  }
}

TEST(Encoder, StackedOutputWidth) {
  Rng rng(2);
  const auto enc = BiGruEncoder::init(6, 3, 2, rng);
  EXPECT_EQ(enc.output_dim(), 6u);
  const auto out = encoder_forward(enc, random({4, 6}, rng));
  EXPECT_EQ(out.states.shape(), (Shape{4, 6}));
}

TEST(FrameFeatures, LengthFormula) {
  for (std::size_t t = 5; t <= 200; ++t) EXPECT_EQ(feature_length(t), (t - 5) / 2 + 1) << t;
  EXPECT_EQ(feature_length(4), 0u);
}

TEST(FrameFeatures, VectorFrontEndConcatenatesWindows) {
  Rng rng(6);
  const auto fx = FrameFeatureExtractor::init_vector(2, 3, rng);
  VideoFrames frames{9, 2, {}};
  for (std::size_t i = 0; i < 18; ++i) frames.data.push_back(static_cast<float>(i) * 0.1f);
  const Tensor out = frame_features(fx, frames);
  ASSERT_EQ(out.shape(), (Shape{3, 3}));
  // Window t covers frames 2t .. 2t+4.
  for (std::size_t t = 0; t < 3; ++t) {
    std::vector<double> window;
    for (std::size_t f = 2 * t; f < 2 * t + 5; ++f) {
      for (float v : frames.frame(f)) window.push_back(v);
    }
    const Tensor x = Tensor::from({10}, window);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(out.at(t, j), affine(x, fx.projection.weight, fx.projection.bias, j), 1e-12);
    }
  }
}

TEST(FrameFeatures, ImageFrontEndShape) {
  Rng rng(6);
  const auto fx = FrameFeatureExtractor::init_image(9, 11, 3, 4, rng);
  VideoFrames frames{7, 99, std::vector<float>(7 * 99, 0.25f)};
  const Tensor out = frame_features(fx, frames);
  EXPECT_EQ(out.shape(), (Shape{2, 4}));
  for (double v : out.data()) EXPECT_TRUE(std::isfinite(v));
}

TEST(FrameFeatures, TooFewFramesIsLengthError) {
  Rng rng(6);
  const auto fx = FrameFeatureExtractor::init_vector(2, 3, rng);
  const VideoFrames frames{4, 2, std::vector<float>(8)};
  EXPECT_THROW(frame_features(fx, frames), LengthError);
}

TEST(Attention, MatchesAdditiveScoringOracle) {
  Rng rng(10);
  const auto p = AttentionParams::init(4, 6, 5, rng);
  const Tensor states = random({7, 6}, rng);
  const Tensor query = random({4}, rng);
  const EncoderStates enc{states, Tensor::zeros({6})};
  const ContextVector ctx = attend(p, query, enc);

  std::vector<double> score(7);
  double norm = 0.0;
  for (std::size_t t = 0; t < 7; ++t) {
    double s = 0.0;
    for (std::size_t a = 0; a < 5; ++a) {
      double e = 0.0;
      for (std::size_t i = 0; i < 4; ++i) e += query.at(i) * p.w_dec.at(i, a);
      for (std::size_t i = 0; i < 6; ++i) e += states.at(t, i) * p.w_enc.at(i, a);
      s += p.v.at(a) * std::tanh(e);
    }
    score[t] = std::exp(s);
    norm += score[t];
  }
  double total = 0.0;
  for (std::size_t t = 0; t < 7; ++t) {
    EXPECT_NEAR(ctx.weights.at(t), score[t] / norm, 1e-12);
    total += ctx.weights.at(t);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  for (std::size_t i = 0; i < 6; ++i) {
    double c = 0.0;
    for (std::size_t t = 0; t < 7; ++t) c += score[t] / norm * states.at(t, i);
    EXPECT_NEAR(ctx.values.at(i), c, 1e-12);
  }
}

TEST(OutputHead, TanhHiddenAndNormalisedLogProbs) {
  Rng rng(12);
  const auto head = OutputHead::init(3, {2, 4}, 5, 6, rng);
  const Tensor s = random({3}, rng);
  const ContextVector c[] = {{random({2}, rng), Tensor()}, {random({4}, rng), Tensor()}};
  const HeadOutput out = output_head(head, s, c);
  ASSERT_EQ(out.hidden.shape(), (Shape{5}));
  ASSERT_EQ(out.log_probs.shape(), (Shape{6}));
  std::vector<double> joined(s.data().begin(), s.data().end());
  for (const auto& ctx : c) joined.insert(joined.end(), ctx.values.data().begin(), ctx.values.data().end());
  const Tensor x = Tensor::from({9}, joined);
  for (std::size_t j = 0; j < 5; ++j) {
    EXPECT_NEAR(out.hidden.at(j), std::tanh(affine(x, head.hidden.weight, head.hidden.bias, j)),
                1e-12);
  }
  double total = 0.0;
  for (double lp : out.log_probs.data()) total += std::exp(lp);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Bridge, OneLinearProjectionPerLayer) {
  Rng rng(13);
  const auto bridge = DecoderBridge::init(6, 4, 2, rng);
  const Tensor summary = random({6}, rng);
  const DecoderState state = bridge(summary);
  ASSERT_EQ(state.hidden.size(), 2u);
  for (std::size_t l = 0; l < 2; ++l) {
    const Tensor want = bridge.per_layer[l](summary);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(state.hidden[l].at(j), want.at(j));
  }
}

TEST(GradSuite, EveryLayerPassesInIsolation) {
  cascade::ModelConfig c;
  c.frame_dim = 12;
  c.feature_dim = 6;
  c.encoder_cell = 5;
  c.decoder_cell = 8;
  c.attention_dim = 6;
  c.head_dim = 7;
  c.embed_dim = 5;
  const auto entries = app::run_grad_suite(c, 3);
  std::size_t layers = 0;
  for (const auto& e : entries) {
    if (e.name.rfind("cascade_", 0) == 0 || e.name == "baseline_was") {
      // Whole-model checks: every coordinate agrees to the rounding floor.
      EXPECT_LT(e.report.max_abs_error, 1e-8) << e.name;
      continue;
    }
    ++layers;
    EXPECT_TRUE(e.report.pass) << e.name << " " << e.report.max_rel_error;
  }
  EXPECT_EQ(layers, 9u);
}

}  // namespace
}  // namespace lipcascade::layers
