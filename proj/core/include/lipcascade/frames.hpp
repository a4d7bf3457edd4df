// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lipcascade {

/// A sentence's frame sequence. Each frame is either a synthetic feature
/// vector or a flattened row-major grayscale image (dim = height * width).
struct VideoFrames {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<float> data;

  std::span<const float> frame(std::size_t i) const {
    return {data.data() + i * dim, dim};
  }
  std::span<float> frame(std::size_t i) { return {data.data() + i * dim, dim}; }

  bool operator==(const VideoFrames&) const = default;
};

}  // namespace lipcascade
