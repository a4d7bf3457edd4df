// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/layers/frame_features.hpp"

#include <string>
#include <vector>

#include "lipcascade/error.hpp"
#include "lipcascade/numerics/ops.hpp"

namespace lipcascade::layers {

using namespace lipcascade::num;

std::size_t feature_length(std::size_t frame_count, std::size_t window,
                           std::size_t stride) {
  if (frame_count < window) return 0;
  return (frame_count - window) / stride + 1;
}

FrameFeatureExtractor FrameFeatureExtractor::init_vector(std::size_t frame_dim,
                                                         std::size_t feature_dim,
                                                         Rng& rng) {
  FrameFeatureExtractor fx;
  fx.kind = FrontEnd::Vector;
  fx.frame_dim = frame_dim;
  fx.projection = Linear::init(kFrameWindow * frame_dim, feature_dim, rng);
  return fx;
}

FrameFeatureExtractor FrameFeatureExtractor::init_image(std::size_t height,
                                                        std::size_t width,
                                                        std::size_t conv_channels,
                                                        std::size_t feature_dim,
                                                        Rng& rng) {
  FrameFeatureExtractor fx;
  fx.kind = FrontEnd::Image;
  fx.image_height = height;
  fx.image_width = width;
  fx.frame_dim = height * width;
  const std::size_t k2 = fx.kernel * fx.kernel;
  fx.conv1 = Linear::init(k2 * kFrameWindow, conv_channels, rng);
  fx.conv2 = Linear::init(k2 * conv_channels, feature_dim, rng);
  const std::size_t h1 = (height - fx.kernel) / fx.conv_stride + 1;
  const std::size_t w1 = (width - fx.kernel) / fx.conv_stride + 1;
  if (height < fx.kernel || width < fx.kernel || h1 < fx.kernel || w1 < fx.kernel) {
    throw ConfigError("image front end needs frames of at least 7x7, got " +
                      std::to_string(height) + "x" + std::to_string(width));
  }
  return fx;
}

std::size_t FrameFeatureExtractor::feature_dim() const {
  return kind == FrontEnd::Vector ? projection.out_dim() : conv2.out_dim();
}

void FrameFeatureExtractor::collect(std::string_view prefix, ParamList& out) const {
  if (kind == FrontEnd::Vector) {
    projection.collect(join_name(prefix, "projection"), out);
  } else {
    conv1.collect(join_name(prefix, "conv1"), out);
    conv2.collect(join_name(prefix, "conv2"), out);
  }
}

namespace {

Tensor image_window_features(const FrameFeatureExtractor& fx, const VideoFrames& frames,
                             std::size_t first) {
  const std::size_t h = fx.image_height, w = fx.image_width;
  std::vector<double> hwc(h * w * kFrameWindow);
  for (std::size_t c = 0; c < kFrameWindow; ++c) {
    const auto f = frames.frame(first + c);
    for (std::size_t p = 0; p < h * w; ++p) hwc[p * kFrameWindow + c] = f[p];
  }
  const Tensor input = Tensor::from({h, w, kFrameWindow}, std::move(hwc));
  const std::size_t h1 = (h - fx.kernel) / fx.conv_stride + 1;
  const std::size_t w1 = (w - fx.kernel) / fx.conv_stride + 1;
  Tensor a1 = relu(fx.conv1(im2col(input, fx.kernel, fx.kernel, fx.conv_stride)));
  a1 = reshape(a1, {h1, w1, fx.conv1.out_dim()});
  const Tensor a2 = relu(fx.conv2(im2col(a1, fx.kernel, fx.kernel, fx.conv_stride)));
  return mean_rows(a2);
}

}  // namespace

Tensor frame_features(const FrameFeatureExtractor& fx, const VideoFrames& frames) {
  if (frames.count < kFrameWindow) {
    throw LengthError("need at least " + std::to_string(kFrameWindow) +
                      " frames, got " + std::to_string(frames.count));
  }
  if (frames.dim != fx.frame_dim) {
    throw ShapeError("frame dimension " + std::to_string(frames.dim) +
                     " does not match front end input " + std::to_string(fx.frame_dim));
  }
  const std::size_t steps = feature_length(frames.count);
  if (fx.kind == FrontEnd::Vector) {
    const std::size_t width = kFrameWindow * frames.dim;
    std::vector<double> windows(steps * width);
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t k = 0; k < kFrameWindow; ++k) {
        const auto f = frames.frame(t * kFrameStride + k);
        std::copy(f.begin(), f.end(), windows.begin() + t * width + k * frames.dim);
      }
    }
    return fx.projection(Tensor::from({steps, width}, std::move(windows)));
  }
  std::vector<Tensor> rows;
  rows.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    rows.push_back(image_window_features(fx, frames, t * kFrameStride));
  }
  return stack_rows(rows);
}

}  // namespace lipcascade::layers
