// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/synthdata/frame_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "lipcascade/error.hpp"

namespace lipcascade::synth {
namespace {

static_assert(std::endian::native == std::endian::little,
              "frame files are written in native little-endian order");

void put_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

}  // namespace

void write_frames(const std::filesystem::path& path, const VideoFrames& frames) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  put_u32(out, static_cast<std::uint32_t>(frames.count));
  put_u32(out, static_cast<std::uint32_t>(frames.dim));
  out.write(reinterpret_cast<const char*>(frames.data.data()),
            static_cast<std::streamsize>(frames.data.size() * sizeof(float)));
  if (!out) throw IoError("failed writing " + path.string());
}

VideoFrames read_frames(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::uint32_t header[2];
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in) throw FormatError(path.string() + ": truncated frame header");
  VideoFrames frames;
  frames.count = header[0];
  frames.dim = header[1];
  frames.data.resize(frames.count * frames.dim);
  in.read(reinterpret_cast<char*>(frames.data.data()),
          static_cast<std::streamsize>(frames.data.size() * sizeof(float)));
  if (!in) throw FormatError(path.string() + ": truncated frame payload");
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError(path.string() + ": trailing bytes after frame payload");
  }
  return frames;
}

}  // namespace lipcascade::synth
