// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "lipcascade/cascade/model.hpp"

namespace lipcascade::cascade::detail_build {

layers::FrameFeatureExtractor make_frontend(const ModelConfig& c, Rng& rng);

/// Decoder attending over `attended` encoders of width 2 * encoder_cell.
AttentiveDecoder make_decoder(const ModelConfig& c, std::size_t vocab,
                              std::size_t summary_dim, std::size_t attended, Rng& rng);

}  // namespace lipcascade::cascade::detail_build
