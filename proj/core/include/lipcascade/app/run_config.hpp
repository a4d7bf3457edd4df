// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lipcascade/cascade/model.hpp"
#include "lipcascade/synthdata/synth.hpp"
#include "lipcascade/training/trainer.hpp"

namespace lipcascade::app {

/// Everything a run needs. Loaded from a flat `key = value` file with dotted
/// section prefixes (`model.enc_cell = 256`) plus command-line overrides.
struct RunConfig {
  std::uint64_t seed = 1;
  std::size_t threads = 1;

  synth::SynthSpec synth;
  std::size_t n_train = 700;
  std::size_t n_val = 100;
  std::size_t n_test = 200;

  cascade::ModelKind mode = cascade::ModelKind::CascadeFull;
  cascade::ModelConfig model;
  training::TrainConfig train;

  std::size_t min_count = 20;
  std::size_t eval_max_len = 40;

  /// Throws ConfigError/SpecError describing the first invalid value.
  void validate() const;
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Parses config text. `origin` names the source in error messages.
RunConfig parse_config_text(const std::string& text, const Overrides& overrides = {},
                            const std::string& origin = "<config>");

RunConfig parse_config(const std::filesystem::path& path, const Overrides& overrides = {});

/// Every key with its effective value, one `key = value` line each, in a
/// fixed order. Parsing the echo reproduces the configuration exactly.
std::string echo_config(const RunConfig& config);

/// Names of all accepted keys, in echo order.
std::vector<std::string> config_keys();

/// Model dimensions with the front end wired to the synthetic frame format.
cascade::ModelConfig model_config(const RunConfig& config);

/// Training settings with run-level seed and thread count applied.
training::TrainConfig train_config(const RunConfig& config);

}  // namespace lipcascade::app
