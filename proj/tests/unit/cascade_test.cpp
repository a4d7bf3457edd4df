// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "lipcascade/cascade/model.hpp"
#include "lipcascade/error.hpp"

namespace lipcascade::cascade {
namespace {

ModelConfig tiny_config() {
  ModelConfig c;
  c.frame_dim = 10;
  c.feature_dim = 6;
  c.encoder_cell = 5;
  c.decoder_cell = 8;
  c.encoder_layers = 2;
  c.decoder_layers = 2;
  c.attention_dim = 6;
  c.head_dim = 7;
  c.embed_dim = 5;
  return c;
}

const VocabSizes kVocab{7, 8, 9};

VideoFrames random_frames(std::size_t count, std::size_t dim, Rng& rng) {
  VideoFrames f{count, dim, std::vector<float>(count * dim)};
  for (float& v : f.data) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  return f;
}

Sample make_sample(Rng& rng) {
  Sample s;
  s.frames = random_frames(15, 10, rng);
  s.targets.pinyin = {3, 4, 5, 1};
  s.targets.tone = {6, 3, 7, 1};
  s.targets.chars = {8, 3, 4, 1};
  return s;
}

double grad_norm(const num::ParamList& params, std::string_view prefix) {
  double total = 0.0;
  for (const auto& p : params) {
    if (p.name.rfind(prefix, 0) != 0 || !p.tensor.has_grad()) continue;
    for (double g : p.tensor.grad()) total += g * g;
  }
  return std::sqrt(total);
}

void zero_all(const num::ParamList& params) {
  for (auto p : params) p.tensor.zero_grad();
}

TEST(Cascade, JointCharacterLossReachesPinyinDecoder) {
  Rng rng(1);
  const CascadeModel model(tiny_config(), kVocab, CascadeMode::Full, 5);
  const Sample sample = make_sample(rng);
  const auto params = model.parameters();

  zero_all(params);
  Rng step(2);
  num::backward(model.training_loss(sample, true, 1.0, step).character);
  EXPECT_GT(grad_norm(params, "pinyin_decoder"), 0.0);
  EXPECT_GT(grad_norm(params, "tone_decoder"), 0.0);

  zero_all(params);
  num::backward(model.training_loss(sample, false, 1.0, step).character);
  EXPECT_EQ(grad_norm(params, "pinyin_decoder"), 0.0);
  EXPECT_EQ(grad_norm(params, "tone_decoder"), 0.0);
  EXPECT_GT(grad_norm(params, "char_decoder"), 0.0);
}

TEST(Cascade, TotalLossIsSumOfParts) {
  Rng rng(3);
  const CascadeModel model(tiny_config(), kVocab, CascadeMode::Full, 5);
  Rng step(4);
  const LossParts parts = model.training_loss(make_sample(rng), true, 1.0, step);
  EXPECT_NEAR(parts.total.item(),
              parts.pinyin.item() + parts.tone.item() + parts.character.item(), 1e-12);
  EXPECT_GT(parts.character.item(), 0.0);
}

TEST(Cascade, NoVideoIgnoresFrames) {
  Rng rng(5);
  const CascadeModel model(tiny_config(), kVocab, CascadeMode::NoVideo, 5);
  Sample a = make_sample(rng);
  Sample b = a;
  b.frames = random_frames(15, 10, rng);
  // With ground-truth feeds the tone and character sub-networks never see frames.
  Rng s1(9), s2(9);
  const LossParts la = model.training_loss(a, false, 1.0, s1);
  const LossParts lb = model.training_loss(b, false, 1.0, s2);
  EXPECT_EQ(la.tone.item(), lb.tone.item());
  EXPECT_EQ(la.character.item(), lb.character.item());
  const double pa = la.pinyin.item();
  const double pb = lb.pinyin.item();
  EXPECT_NE(pa, pb);  // the pinyin sub-network still reads video
}

TEST(Cascade, FullModelDependsOnFramesDownstream) {
  Rng rng(5);
  const CascadeModel model(tiny_config(), kVocab, CascadeMode::Full, 5);
  Sample a = make_sample(rng);
  Sample b = a;
  b.frames = random_frames(15, 10, rng);
  Rng s1(9), s2(9);
  // Separate training: the tone loss sees video only through its own attention.
  EXPECT_NE(model.training_loss(a, false, 1.0, s1).tone.item(),
            model.training_loss(b, false, 1.0, s2).tone.item());
}

TEST(Cascade, AttentionMapCounts) {
  Rng rng(6);
  const VideoFrames frames = random_frames(15, 10, rng);
  const CascadeModel full(tiny_config(), kVocab, CascadeMode::Full, 1);
  const CascadeModel novid(tiny_config(), kVocab, CascadeMode::NoVideo, 1);
  const BaselineModel base(tiny_config(), kVocab, 1);
  const auto check = [&](const LipReader& m, std::size_t want) {
    const Decoded d = m.decode(frames, 6);
    ASSERT_EQ(d.attention.size(), want);
    for (const auto& map : d.attention) {
      ASSERT_EQ(map.weights.rank(), 2u);
      for (std::size_t r = 0; r < map.weights.dim(0); ++r) {
        double total = 0.0;
        for (std::size_t c = 0; c < map.weights.dim(1); ++c) total += map.weights.at(r, c);
        EXPECT_NEAR(total, 1.0, 1e-6) << map.name;
      }
    }
  };
  check(full, 6);
  check(novid, 4);
  check(base, 1);
}

TEST(Cascade, DecodeRespectsMaxLen) {
  Rng rng(7);
  const CascadeModel model(tiny_config(), kVocab, CascadeMode::Full, 2);
  const Decoded d = model.decode(random_frames(15, 10, rng), 3);
  EXPECT_LE(d.pinyin.size(), 3u);
  EXPECT_LE(d.tone.size(), 3u);
  EXPECT_LE(d.chars.size(), 3u);
  EXPECT_THROW(model.decode(random_frames(15, 10, rng), 0), LengthError);
}

TEST(Cascade, SameSeedSameParameters) {
  const CascadeModel a(tiny_config(), kVocab, CascadeMode::Full, 42);
  const CascadeModel b(tiny_config(), kVocab, CascadeMode::Full, 42);
  const CascadeModel c(tiny_config(), kVocab, CascadeMode::Full, 43);
  const auto pa = a.parameters(), pb = b.parameters(), pc = c.parameters();
  ASSERT_EQ(pa.size(), pb.size());
  bool any_diff = false;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    EXPECT_EQ(pa[i].name, pb[i].name);
    EXPECT_TRUE(std::equal(pa[i].tensor.data().begin(), pa[i].tensor.data().end(),
                           pb[i].tensor.data().begin()));
    any_diff |= !std::equal(pa[i].tensor.data().begin(), pa[i].tensor.data().end(),
                            pc[i].tensor.data().begin());
  }
  EXPECT_TRUE(any_diff);
}

TEST(Cascade, MisalignedTargetsAreRejected) {
  Rng rng(8);
  const CascadeModel model(tiny_config(), kVocab, CascadeMode::Full, 2);
  Sample s = make_sample(rng);
  s.targets.tone.pop_back();
  Rng step(1);
  EXPECT_THROW(model.training_loss(s, true, 1.0, step), AlignmentError);
}

TEST(Cascade, InvalidConfigurations) {
  ModelConfig c = tiny_config();
  c.decoder_cell = 0;
  EXPECT_THROW(CascadeModel(c, kVocab, CascadeMode::Full, 1), ConfigError);
  EXPECT_THROW(CascadeModel(tiny_config(), VocabSizes{7, 0, 9}, CascadeMode::Full, 1),
               ConfigError);
  EXPECT_THROW(parse_model_kind("lipnet"), ConfigError);
  EXPECT_EQ(parse_model_kind(to_string(ModelKind::BaselineWas)), ModelKind::BaselineWas);
}

TEST(Cascade, TooShortVideoIsLengthError) {
  Rng rng(9);
  const CascadeModel model(tiny_config(), kVocab, CascadeMode::Full, 2);
  EXPECT_THROW(model.decode(random_frames(4, 10, rng), 5), LengthError);
}

}  // namespace
}  // namespace lipcascade::cascade
