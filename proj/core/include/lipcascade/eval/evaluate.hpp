// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>

#include "lipcascade/cascade/model.hpp"
#include "lipcascade/eval/metrics.hpp"

namespace lipcascade::eval {

/// Overall rates come from free-running decoding of the whole model. The
/// sub-network rows decode one stage with ground-truth upstream tokens:
/// V2P pinyin from frames, VP2T tone given pinyin, VPT2C characters given
/// pinyin and tone. Models without pinyin/tone stages report CER only.
struct EvalReport {
  double overall_cer = 0.0;
  double overall_per = 0.0;
  double overall_ter = 0.0;
  double v2p_per = 0.0;
  double vp2t_ter = 0.0;
  double vpt2c_cer = 0.0;
  bool has_subnetworks = false;
  std::size_t samples = 0;

  /// `key=value` lines: overall.cer, overall.per, ..., vpt2c.cer.
  std::string to_text() const;
  std::map<std::string, double> values() const;
};

struct EvalOptions {
  std::size_t max_len = 40;
  /// Feed used for the sub-network rows: head hiddens (joint) or token
  /// embeddings (separately trained sub-networks).
  bool joint = true;
  /// Samples are decoded on this many threads; the pooled result does not
  /// depend on it.
  std::size_t threads = 1;
};

/// Throws UndefinedRateError on an empty dataset.
EvalReport evaluate(const cascade::LipReader& model, std::span<const cascade::Sample> data,
                    const EvalOptions& options);

/// Per-sample edit operations of the full decode, in dataset order.
struct SampleScores {
  EditOps cer;
  EditOps per;
  EditOps ter;
};

std::vector<SampleScores> score_overall(const cascade::LipReader& model,
                                        std::span<const cascade::Sample> data,
                                        std::size_t max_len, std::size_t threads = 1);

/// Target ids with the trailing [eos] (and any special ids) removed.
std::vector<num::TokenId> strip_specials(std::span<const num::TokenId> ids);

}  // namespace lipcascade::eval
