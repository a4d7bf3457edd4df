// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lipcascade/numerics/grad_check.hpp"
#include "lipcascade/training/optimizer.hpp"

namespace lipcascade::training {

inline constexpr char kCheckpointMagic[8] = {'L', 'C', 'A', 'S', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct ParamRecord {
  std::string name;
  num::Shape shape;
  std::vector<double> values;

  bool operator==(const ParamRecord&) const = default;
};

/// File layout, all integers little-endian:
///   magic[8] u32 version
///   u64 config length, config text
///   u32 count, count x record
///   optional: tag "OPTIMIZR", u32 kind, u64 step, f64 beta1, beta2, epsilon,
///             u32 count, count x (m record, v record)
/// A record is u32 name length, name, u32 rank, rank x u64 dims, raw f64.
struct Checkpoint {
  std::string config_echo;
  std::vector<ParamRecord> params;
  std::optional<OptimizerState> optimizer;

  bool operator==(const Checkpoint&) const = default;
};

Checkpoint make_checkpoint(std::span<const NamedTensor> params, const OptimizerState* optimizer,
                           std::string config_echo);

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);

/// FormatError on bad magic, version, truncation or trailing bytes.
Checkpoint read_checkpoint(const std::filesystem::path& path);

void save_checkpoint(const std::filesystem::path& path, std::span<const NamedTensor> params,
                     const OptimizerState* optimizer, const std::string& config_echo);

/// Copies stored values into `params`; names, order and shapes must match.
void load_parameters(const Checkpoint& checkpoint, std::span<const NamedTensor> params);

}  // namespace lipcascade::training
