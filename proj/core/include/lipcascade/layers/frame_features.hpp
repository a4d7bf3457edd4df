// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "lipcascade/frames.hpp"
#include "lipcascade/layers/params.hpp"

namespace lipcascade::layers {

inline constexpr std::size_t kFrameWindow = 5;
inline constexpr std::size_t kFrameStride = 2;

/// floor((frames - window) / stride) + 1; zero when frames < window.
std::size_t feature_length(std::size_t frame_count, std::size_t window = kFrameWindow,
                           std::size_t stride = kFrameStride);

enum class FrontEnd { Vector, Image };

/// Per-window visual front end. Windows of 5 frames advance by 2 frames.
///
/// Vector mode: the window's frames are concatenated and mapped linearly to
/// the feature dimension. Image mode: the window is a 5-channel image passed
/// through two strided 3x3 convolutions with ReLU, then global average pooled;
/// the second convolution has feature_dim output channels.
struct FrameFeatureExtractor {
  FrontEnd kind = FrontEnd::Vector;
  std::size_t frame_dim = 0;
  std::size_t image_height = 0;
  std::size_t image_width = 0;
  std::size_t kernel = 3;
  std::size_t conv_stride = 2;
  Linear projection;  // vector mode: [5 * frame_dim, d_v]
  Linear conv1;       // image mode: [k*k*5, c1]
  Linear conv2;       // image mode: [k*k*c1, d_v]

  static FrameFeatureExtractor init_vector(std::size_t frame_dim,
                                           std::size_t feature_dim, Rng& rng);
  static FrameFeatureExtractor init_image(std::size_t height, std::size_t width,
                                          std::size_t conv_channels,
                                          std::size_t feature_dim, Rng& rng);
  std::size_t feature_dim() const;
  void collect(std::string_view prefix, ParamList& out) const;
};

/// [T_f, d_v] features; frames beyond the last full window are dropped.
Tensor frame_features(const FrameFeatureExtractor& fx, const VideoFrames& frames);

}  // namespace lipcascade::layers
