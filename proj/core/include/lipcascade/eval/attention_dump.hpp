// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lipcascade/cascade/model.hpp"
#include "lipcascade/textproc/annotation.hpp"

namespace lipcascade::eval {

struct AttentionDumpOptions {
  bool write_image = true;
  std::size_t pixels_per_cell = 8;
};

struct DumpedAttention {
  std::string name;  // e.g. "video->pinyin"
  std::filesystem::path matrix;
  std::filesystem::path labels;
  std::filesystem::path image;  // empty when images are disabled
};

/// Decodes `frames` greedily and writes every attention map of the decode:
/// `<enc>_to_<dec>.csv` (one decoder step per line, comma-separated),
/// `<enc>_to_<dec>.labels.tsv` (`rows` and `cols` lines of token labels) and
/// optionally `<enc>_to_<dec>.pgm` (weight 1 is white).
std::vector<DumpedAttention> dump_attention(const cascade::LipReader& model,
                                            const VideoFrames& frames,
                                            const text::Vocabularies& vocabs,
                                            std::size_t max_len,
                                            const std::filesystem::path& out_dir,
                                            const AttentionDumpOptions& options = {});

void write_attention_matrix(const std::filesystem::path& path, const num::Tensor& weights);
std::vector<std::vector<double>> read_attention_matrix(const std::filesystem::path& path);
void write_attention_image(const std::filesystem::path& path, const num::Tensor& weights,
                           std::size_t pixels_per_cell);

}  // namespace lipcascade::eval
