// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "lipcascade/app/pipeline.hpp"
#include "lipcascade/app/run_config.hpp"
#include "lipcascade/error.hpp"
#include "lipcascade/training/checkpoint.hpp"
#include "lipcascade/training/optimizer.hpp"
#include "lipcascade/training/schedule.hpp"
#include "lipcascade/training/trainer.hpp"

namespace lipcascade::training {
namespace {

namespace fs = std::filesystem;

void set_grad(Tensor t, std::vector<double> g) {
  auto buf = t.mutable_grad();
  std::copy(g.begin(), g.end(), buf.begin());
}

TEST(Optimizer, AdamMatchesScalarReference) {
  const Tensor w = Tensor::from({2}, {0.5, -1.0}, true);
  const ParamList params = {{"w", w}};
  OptimizerState state = OptimizerState::create(OptimizerKind::Adam, params);
  const double grads[3][2] = {{0.1, -0.3}, {0.2, 0.0}, {-0.4, 1.5}};
  double p[2] = {0.5, -1.0}, m[2] = {0, 0}, v[2] = {0, 0};
  const double lr = 0.01;
  for (int t = 1; t <= 3; ++t) {
    zero_grads(params);
    set_grad(w, {grads[t - 1][0], grads[t - 1][1]});
    optimizer_step(state, params, lr);
    for (int i = 0; i < 2; ++i) {
      const double g = grads[t - 1][i];
      m[i] = 0.9 * m[i] + 0.1 * g;
      v[i] = 0.999 * v[i] + 0.001 * g * g;
      const double mh = m[i] / (1 - std::pow(0.9, t));
      const double vh = v[i] / (1 - std::pow(0.999, t));
      p[i] -= lr * mh / (std::sqrt(vh) + 1e-8);
      EXPECT_NEAR(w.at(static_cast<std::size_t>(i)), p[i], 1e-15);
    }
  }
  EXPECT_EQ(state.step, 3u);
}

TEST(Optimizer, FirstAdamStepMovesByLearningRate) {
  const Tensor w = Tensor::from({3}, {0.0, 0.0, 0.0}, true);
  const ParamList params = {{"w", w}};
  OptimizerState state = OptimizerState::create(OptimizerKind::Adam, params);
  set_grad(w, {2.0, -7.0, 0.001});
  optimizer_step(state, params, 0.1);
  EXPECT_NEAR(w.at(0), -0.1, 1e-8);
  EXPECT_NEAR(w.at(1), 0.1, 1e-8);
  EXPECT_NEAR(w.at(2), -0.1, 1e-6);
}

TEST(Optimizer, VanishingLearningRateLeavesParametersUnchanged) {
  const Tensor w = Tensor::from({3}, {0.3, -2.0, 1e-3}, true);
  const ParamList params = {{"w", w}};
  const std::vector<double> before(w.data().begin(), w.data().end());
  for (OptimizerKind kind : {OptimizerKind::Adam, OptimizerKind::Sgd}) {
    OptimizerState state = OptimizerState::create(kind, params);
    set_grad(w, {1.0, -1.0, 0.5});
    optimizer_step(state, params, 1e-300);
    EXPECT_EQ(std::vector<double>(w.data().begin(), w.data().end()), before);
  }
}

TEST(Optimizer, SgdAndErrors) {
  const Tensor w = Tensor::from({2}, {1.0, 2.0}, true);
  const ParamList params = {{"w", w}};
  OptimizerState sgd = OptimizerState::create(OptimizerKind::Sgd, params);
  set_grad(w, {0.5, -1.0});
  optimizer_step(sgd, params, 0.1);
  EXPECT_DOUBLE_EQ(w.at(0), 0.95);
  EXPECT_DOUBLE_EQ(w.at(1), 2.1);

  set_grad(w, {std::nan(""), 0.0});
  EXPECT_THROW(optimizer_step(sgd, params, 0.1), NumericError);
  OptimizerState empty = OptimizerState::create(OptimizerKind::Adam, {});
  EXPECT_THROW(optimizer_step(empty, params, 0.1), ShapeError);
  EXPECT_THROW(parse_optimizer_kind("rmsprop"), ConfigError);
  EXPECT_EQ(parse_optimizer_kind(to_string(OptimizerKind::Sgd)), OptimizerKind::Sgd);
}

TEST(Optimizer, ClipGradNorm) {
  const Tensor a = Tensor::from({2}, {0, 0}, true);
  const Tensor b = Tensor::from({1}, {0}, true);
  const ParamList params = {{"a", a}, {"b", b}};
  set_grad(a, {3.0, 0.0});
  set_grad(b, {4.0});
  EXPECT_DOUBLE_EQ(clip_grad_norm(params, 10.0), 5.0);
  EXPECT_EQ(a.grad()[0], 3.0);
  EXPECT_DOUBLE_EQ(clip_grad_norm(params, 1.0), 5.0);
  EXPECT_NEAR(a.grad()[0], 0.6, 1e-15);
  EXPECT_NEAR(b.grad()[0], 0.8, 1e-15);
  EXPECT_NEAR(clip_grad_norm(params, 0.0), 1.0, 1e-15);
}

TEST(Schedule, PlateauHalvesAfterPatience) {
  const std::vector<double> flat(12, 3.0);
  const auto lr = lr_trace(flat, 1.0);
  for (std::size_t e = 0; e < 12; ++e) {
    const double want = e < 5 ? 1.0 : e < 9 ? 0.5 : 0.25;
    EXPECT_DOUBLE_EQ(lr[e], want) << e;
  }
}

TEST(Schedule, ImprovementResetsPatience) {
  const std::vector<double> losses = {5, 5, 5, 4, 4, 4, 4, 3};
  const auto lr = lr_trace(losses, 0.2);
  for (double v : lr) EXPECT_DOUBLE_EQ(v, 0.2);
  PlateauSchedule s{1.0};
  EXPECT_EQ(s.update(1.0), 1.0);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(s.update(1.0), 1.0);
  EXPECT_EQ(s.update(1.0), 0.5);
  EXPECT_EQ(s.update(0.9), 0.5);
}

TEST(Schedule, SamplingRateEndpointsAndMonotone) {
  EXPECT_DOUBLE_EQ(sampling_rate_at(0, 30), 0.7);
  EXPECT_DOUBLE_EQ(sampling_rate_at(29, 30), 1.0);
  EXPECT_DOUBLE_EQ(sampling_rate_at(0, 1), 0.7);  // a single epoch stays at the start rate
  for (std::size_t e = 1; e < 30; ++e) {
    EXPECT_GT(sampling_rate_at(e, 30), sampling_rate_at(e - 1, 30));
  }
}

TEST(Schedule, CurriculumPoolsGrow) {
  const std::array<std::vector<std::size_t>, text::kBucketCount> buckets = {
      std::vector<std::size_t>{0, 3}, std::vector<std::size_t>{}, std::vector<std::size_t>{1},
      std::vector<std::size_t>{2, 4}};
  std::size_t previous = 0;
  for (std::size_t epoch = 0; epoch < 20; ++epoch) {
    const std::size_t stage = curriculum_stage(epoch, 5);
    EXPECT_EQ(stage, std::min<std::size_t>(3, epoch / 5));
    const auto pool = curriculum_pool(buckets, stage);
    EXPECT_GE(pool.size(), previous);
    previous = pool.size();
  }
  EXPECT_EQ(previous, 5u);
  EXPECT_EQ(curriculum_stage(0, 0), 3u);
}

TEST(Checkpoint, RoundTripWithOptimizer) {
  const fs::path dir = fs::temp_directory_path() / "lipcascade_ckpt_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const Tensor a = Tensor::from({2, 3}, {1, 2, 3, 4, 5, 6}, true);
  const Tensor b = Tensor::from({1}, {-0.125}, true);
  const ParamList params = {{"a", a}, {"b", b}};
  OptimizerState opt = OptimizerState::create(OptimizerKind::Adam, params);
  set_grad(a, {1, 1, 1, 1, 1, 1});
  set_grad(b, {2});
  optimizer_step(opt, params, 0.01);
  save_checkpoint(dir / "x.ckpt", params, &opt, "seed = 1\n");

  const Checkpoint c = read_checkpoint(dir / "x.ckpt");
  EXPECT_EQ(c.config_echo, "seed = 1\n");
  ASSERT_TRUE(c.optimizer.has_value());
  EXPECT_EQ(*c.optimizer, opt);
  EXPECT_EQ(c, make_checkpoint(params, &opt, "seed = 1\n"));

  const Tensor a2 = Tensor::zeros({2, 3}, true);
  const Tensor b2 = Tensor::zeros({1}, true);
  const ParamList fresh = {{"a", a2}, {"b", b2}};
  load_parameters(c, fresh);
  EXPECT_EQ(a2.at(1, 2), a.at(1, 2));
  EXPECT_EQ(b2.at(0), b.at(0));

  const ParamList wrong_shape = {{"a", Tensor::zeros({3, 2}, true)}, {"b", b2}};
  EXPECT_THROW(load_parameters(c, wrong_shape), FormatError);
  const ParamList too_few = {{"a", a2}};
  EXPECT_THROW(load_parameters(c, too_few), FormatError);

  const auto size = fs::file_size(dir / "x.ckpt");
  for (std::uintmax_t cut : {std::uintmax_t{3}, size / 2, size - 1}) {
    fs::copy_file(dir / "x.ckpt", dir / "cut.ckpt", fs::copy_options::overwrite_existing);
    fs::resize_file(dir / "cut.ckpt", cut);
    EXPECT_THROW(read_checkpoint(dir / "cut.ckpt"), FormatError) << cut;
  }
  {
    std::ofstream junk(dir / "junk.ckpt", std::ios::binary);
    junk << "NOTACKPT and more bytes";
  }
  EXPECT_THROW(read_checkpoint(dir / "junk.ckpt"), FormatError);
  EXPECT_THROW(read_checkpoint(dir / "missing.ckpt"), IoError);
  fs::remove_all(dir);
}

struct TinyData {
  app::RunConfig config;
  cascade::VocabSizes vocab;
  std::vector<cascade::Sample> train;
  std::vector<cascade::Sample> val;
};

TinyData tiny_data() {
  TinyData d;
  d.config = app::parse_config(fs::path(LIPCASCADE_CONFIG_DIR) / "tiny.conf");
  const auto corpus = synth::generate_corpus(d.config.synth, d.config.n_train, d.config.n_val,
                                             d.config.n_test, d.config.seed);
  const auto vocabs = app::build_vocabularies(corpus.train, d.config.min_count);
  d.vocab = app::vocab_sizes(vocabs);
  d.train = app::encode_samples(corpus.train, vocabs).samples;
  d.val = app::encode_samples(corpus.val, vocabs).samples;
  return d;
}

TEST(Trainer, EvaluateLossIsRepeatable) {
  const TinyData d = tiny_data();
  const auto model = app::build_model(d.config, d.vocab);
  const EpochRecord a = evaluate_loss(*model, d.train, true);
  const EpochRecord b = evaluate_loss(*model, d.train, true);
  EXPECT_EQ(a.loss, b.loss);
  EXPECT_NEAR(a.loss, a.loss_pinyin + a.loss_tone + a.loss_char, 1e-12 * a.loss);
}

TEST(Trainer, LossFallsAndHistoryIsComplete) {
  const TinyData d = tiny_data();
  const auto model = app::build_model(d.config, d.vocab);
  TrainConfig cfg = app::train_config(d.config);
  cfg.max_epochs = 8;
  cfg.initial_lr = 0.01;
  cfg.curriculum = false;
  const double before = evaluate_loss(*model, d.train, true).loss;
  std::size_t callbacks = 0;
  TrainCallbacks cb;
  cb.on_epoch = [&](const EpochRecord& r, const OptimizerState& opt, bool) {
    EXPECT_EQ(r.epoch, callbacks);
    EXPECT_GT(opt.step, 0u);
    ++callbacks;
  };
  const TrainHistory h = train(*model, d.train, d.val, d.vocab, cfg, cb);
  ASSERT_EQ(h.epochs.size(), 8u);
  EXPECT_EQ(callbacks, 8u);
  EXPECT_LT(evaluate_loss(*model, d.train, true).loss, before);
  EXPECT_DOUBLE_EQ(h.epochs.front().sampling_rate, 0.7);
  EXPECT_DOUBLE_EQ(h.epochs.back().sampling_rate, 1.0);
  std::size_t lines = 0;
  for (char c : h.to_tsv()) lines += c == '\n';
  EXPECT_GE(lines, 8u);
}

TEST(Trainer, SameSeedSameHistory) {
  const TinyData d = tiny_data();
  TrainConfig cfg = app::train_config(d.config);
  cfg.max_epochs = 2;
  const auto m1 = app::build_model(d.config, d.vocab);
  const auto m2 = app::build_model(d.config, d.vocab);
  const TrainHistory h1 = train(*m1, d.train, d.val, d.vocab, cfg);
  const TrainHistory h2 = train(*m2, d.train, d.val, d.vocab, cfg);
  EXPECT_EQ(h1.epochs, h2.epochs);
  EXPECT_EQ(h1.to_tsv(), h2.to_tsv());
}

TEST(Trainer, ConfigValidation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = TrainConfig{};
  c.lr_factor = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = TrainConfig{};
  c.sampling_start = -0.1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = TrainConfig{};
  c.max_epochs = 12;
  EXPECT_EQ(c.effective_stage_epochs(), 3u);
}

TEST(Trainer, RejectsVocabularyMismatchAndEmptyData) {
  const TinyData d = tiny_data();
  const auto model = app::build_model(d.config, d.vocab);
  cascade::VocabSizes wrong = d.vocab;
  wrong.character += 1;
  EXPECT_THROW(check_vocabularies(*model, wrong, d.train), ConfigError);
  EXPECT_THROW(train(*model, {}, d.val, d.vocab, app::train_config(d.config)), ConfigError);
}

}  // namespace
}  // namespace lipcascade::training
