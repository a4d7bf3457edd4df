// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/training/trainer.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "lipcascade/error.hpp"
#include "lipcascade/eval/evaluate.hpp"
#include "lipcascade/textproc/annotation.hpp"
#include "lipcascade/training/schedule.hpp"

namespace lipcascade::training {
namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

std::size_t sentence_length(const cascade::Sample& s) {
  const auto& chars = s.targets.chars;
  return chars.empty() ? 0 : chars.size() - 1;  // minus [eos]
}

}  // namespace

void TrainConfig::validate() const {
  if (!(initial_lr >= 0.0) || !std::isfinite(initial_lr)) {
    throw ConfigError("train.lr must be a finite non-negative number");
  }
  if (!(lr_factor > 0.0 && lr_factor <= 1.0)) throw ConfigError("train.lr_factor must be in (0, 1]");
  if (patience == 0) throw ConfigError("train.patience must be positive");
  for (double r : {sampling_start, sampling_end}) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("sampling endpoints must lie in [0, 1]");
  }
  if (batch_size == 0) throw ConfigError("train.batch_size must be positive");
  if (max_epochs == 0) throw ConfigError("train.max_epochs must be positive");
  if (eval_max_len == 0) throw ConfigError("eval.max_len must be positive");
  if (clip_norm < 0.0) throw ConfigError("train.clip_norm must be >= 0");
}

std::size_t TrainConfig::effective_stage_epochs() const {
  if (stage_epochs > 0) return stage_epochs;
  return std::max<std::size_t>(1, max_epochs / text::kBucketCount);
}

std::string TrainHistory::to_tsv() const {
  std::string out;
  for (const auto& e : epochs) {
    out += std::to_string(e.epoch);
    for (double v : {e.loss, e.loss_pinyin, e.loss_tone, e.loss_char, e.val_cer, e.val_per,
                     e.val_ter, e.lr, e.sampling_rate}) {
      out += '\t';
      append_double(out, v);
    }
    out += '\t';
    out += std::to_string(e.stage);
    out += '\n';
  }
  return out;
}

void check_vocabularies(const cascade::LipReader& model, cascade::VocabSizes vocab,
                        std::span<const cascade::Sample> data) {
  const cascade::VocabSizes heads = model.vocab_sizes();
  const bool cascade = model.predicts_pinyin();
  if (heads.character != vocab.character ||
      (cascade && (heads.pinyin != vocab.pinyin || heads.tone != vocab.tone))) {
    throw ConfigError("model heads (pinyin " + std::to_string(heads.pinyin) + ", tone " +
                      std::to_string(heads.tone) + ", char " + std::to_string(heads.character) +
                      ") do not match vocabularies (" + std::to_string(vocab.pinyin) + ", " +
                      std::to_string(vocab.tone) + ", " + std::to_string(vocab.character) + ")");
  }
  auto check = [](std::span<const num::TokenId> ids, std::size_t size, const char* what) {
    for (auto id : ids) {
      if (id < 0 || static_cast<std::size_t>(id) >= size) {
        throw ConfigError(std::string(what) + " id " + std::to_string(id) +
                          " outside vocabulary of size " + std::to_string(size));
      }
    }
  };
  for (const auto& s : data) {
    check(s.targets.chars, vocab.character, "character");
    if (cascade) {
      check(s.targets.pinyin, vocab.pinyin, "pinyin");
      check(s.targets.tone, vocab.tone, "tone");
    }
  }
}

EpochRecord evaluate_loss(const cascade::LipReader& model, std::span<const cascade::Sample> data,
                          bool joint) {
  num::NoGradGuard no_grad;
  EpochRecord r;
  Rng unused(0);
  for (const auto& s : data) {
    const auto parts = model.training_loss(s, joint, 1.0, unused);
    r.loss += parts.total.item();
    r.loss_pinyin += parts.pinyin.item();
    r.loss_tone += parts.tone.item();
    r.loss_char += parts.character.item();
  }
  if (!data.empty()) {
    const double n = static_cast<double>(data.size());
    r.loss /= n;
    r.loss_pinyin /= n;
    r.loss_tone /= n;
    r.loss_char /= n;
  }
  return r;
}

TrainHistory train(const cascade::LipReader& model, std::span<const cascade::Sample> train_set,
                   std::span<const cascade::Sample> val_set, cascade::VocabSizes vocab,
                   const TrainConfig& config, const TrainCallbacks& callbacks,
                   OptimizerState* resume) {
  config.validate();
  if (train_set.empty()) throw ConfigError("training set is empty");
  check_vocabularies(model, vocab, train_set);
  check_vocabularies(model, vocab, val_set);

  const num::ParamList params = model.parameters();
  OptimizerState state =
      resume ? *resume : OptimizerState::create(config.optimizer, params);
  PlateauSchedule schedule{config.initial_lr, config.patience, config.lr_factor};

  std::array<std::vector<std::size_t>, text::kBucketCount> buckets;
  for (std::size_t i = 0; i < train_set.size(); ++i) {
    buckets[static_cast<std::size_t>(text::bucket_for_length(sentence_length(train_set[i])).index)]
        .push_back(i);
  }
  std::vector<std::size_t> everything(train_set.size());
  for (std::size_t i = 0; i < everything.size(); ++i) everything[i] = i;

  TrainHistory history;
  history.best_val_cer = std::numeric_limits<double>::infinity();
  const std::size_t stage_epochs = config.effective_stage_epochs();

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = schedule.lr;
    rec.sampling_rate =
        sampling_rate_at(epoch, config.max_epochs, config.sampling_start, config.sampling_end);
    const double teacher_forcing =
        config.sampling_inverse ? 1.0 - rec.sampling_rate : rec.sampling_rate;
    const bool joint = config.joint && epoch >= config.pretrain_epochs;

    std::vector<std::size_t> pool;
    if (config.curriculum) {
      rec.stage = curriculum_stage(epoch, stage_epochs);
      pool = curriculum_pool(buckets, rec.stage);
      // Stages whose buckets are all empty fall through to the next non-empty one.
      for (std::size_t s = rec.stage + 1; pool.empty() && s < text::kBucketCount; ++s) {
        pool = curriculum_pool(buckets, s);
      }
    } else {
      rec.stage = text::kBucketCount - 1;
      pool = everything;
    }
    Rng shuffle_rng(config.seed, "train/shuffle", epoch);
    shuffle_rng.shuffle(std::span<std::size_t>(pool));
    Rng sampling_rng(config.seed, "train/sampling", epoch);

    for (std::size_t begin = 0; begin < pool.size(); begin += config.batch_size) {
      const std::size_t end = std::min(pool.size(), begin + config.batch_size);
      const double inv_batch = 1.0 / static_cast<double>(end - begin);
      zero_grads(params);
      for (std::size_t b = begin; b < end; ++b) {
        const auto parts =
            model.training_loss(train_set[pool[b]], joint, teacher_forcing, sampling_rng);
        rec.loss += parts.total.item();
        rec.loss_pinyin += parts.pinyin.item();
        rec.loss_tone += parts.tone.item();
        rec.loss_char += parts.character.item();
        num::backward(num::scale(parts.total, inv_batch));
      }
      if (config.clip_norm > 0.0) clip_grad_norm(params, config.clip_norm);
      optimizer_step(state, params, schedule.lr);
    }
    const double n = static_cast<double>(pool.size());
    rec.loss /= n;
    rec.loss_pinyin /= n;
    rec.loss_tone /= n;
    rec.loss_char /= n;
    if (!std::isfinite(rec.loss)) {
      throw NumericError("training loss became non-finite at epoch " + std::to_string(epoch));
    }

    bool is_best = false;
    if (!val_set.empty()) {
      const auto scores =
          eval::score_overall(model, val_set, config.eval_max_len, config.eval_threads);
      eval::RateAccumulator cer, per, ter;
      for (const auto& s : scores) {
        cer.add(s.cer);
        per.add(s.per);
        ter.add(s.ter);
      }
      rec.val_cer = cer.rate();
      const double nan = std::numeric_limits<double>::quiet_NaN();
      rec.val_per = per.ref_total ? per.rate() : nan;
      rec.val_ter = ter.ref_total ? ter.rate() : nan;
      if (rec.val_cer < history.best_val_cer) {
        history.best_val_cer = rec.val_cer;
        history.best_epoch = epoch;
        is_best = true;
      }
    } else {
      rec.val_cer = rec.val_per = rec.val_ter = std::numeric_limits<double>::quiet_NaN();
      is_best = true;
      history.best_epoch = epoch;
    }

    schedule.update(rec.loss);
    history.epochs.push_back(rec);
    if (callbacks.on_epoch) callbacks.on_epoch(rec, state, is_best);
  }
  if (resume) *resume = state;
  return history;
}

}  // namespace lipcascade::training
