// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "lipcascade/frames.hpp"

namespace lipcascade::synth {

// Frame file: little-endian u32 T, u32 dim, then T*dim float32, row-major.
void write_frames(const std::filesystem::path& path, const VideoFrames& frames);
VideoFrames read_frames(const std::filesystem::path& path);

}  // namespace lipcascade::synth
