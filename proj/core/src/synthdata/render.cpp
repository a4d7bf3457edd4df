// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "lipcascade/error.hpp"
#include "lipcascade/synthdata/synth.hpp"

namespace lipcascade::synth {
namespace {

// Mouth opening over the frames of one syllable; dips between syllables so
// that repeated visemes remain countable.
double envelope(std::size_t k, std::size_t frames) {
  return 0.5 + 0.5 * std::sin(std::numbers::pi * (static_cast<double>(k) + 0.5) /
                              static_cast<double>(frames));
}

void render_vector(std::span<float> frame, std::size_t viseme, int tone, double env,
                   const SynthSpec& spec) {
  frame[viseme] = static_cast<float>(env);
  frame[spec.n_visemes + static_cast<std::size_t>(tone)] +=
      static_cast<float>(spec.tone_channel_amplitude * env);
}

// Grayscale patch: an ellipse whose axes encode the viseme class, and a band
// along the bottom rows (throat region) whose brightness encodes the tone.
void render_image(std::span<float> frame, std::size_t viseme, int tone, double env,
                  const SynthSpec& spec) {
  const std::size_t h = spec.image_height, w = spec.image_width;
  const double cx = 0.5 * static_cast<double>(w), cy = 0.4 * static_cast<double>(h);
  const double ax = static_cast<double>(w) * (0.12 + 0.08 * static_cast<double>(viseme % 4));
  const double ay = static_cast<double>(h) * env *
                    (0.06 + 0.06 * static_cast<double>((viseme / 4) % 4));
  const std::size_t band = h - h / 8;
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double v = 0.0;
      const double dx = (static_cast<double>(x) - cx) / ax;
      const double dy = (static_cast<double>(y) - cy) / std::max(ay, 1e-6);
      if (dx * dx + dy * dy <= 1.0) v = 1.0;
      if (y >= band) {
        v += spec.tone_channel_amplitude * env * (static_cast<double>(tone) + 1.0) /
             static_cast<double>(kToneCount);
      }
      frame[y * w + x] = static_cast<float>(v);
    }
  }
}

}  // namespace

VideoFrames render_frames(const text::SentenceAnnotation& annotation,
                          const Lexicon& lexicon, const SynthSpec& spec, Rng& rng) {
  spec.validate();
  annotation.validate();
  const std::size_t per = spec.frames_per_syllable;
  VideoFrames frames;
  frames.count = per * annotation.length();
  frames.dim = spec.rendered_dim();
  frames.data.assign(frames.count * frames.dim, 0.0f);
  for (std::size_t s = 0; s < annotation.length(); ++s) {
    const LexiconEntry& e = lexicon.entries.at(lexicon.index_of(annotation.chars[s]));
    const int tone = annotation.tones[s].value();
    for (std::size_t k = 0; k < per; ++k) {
      auto frame = frames.frame(s * per + k);
      const double env = envelope(k, per);
      if (spec.render == RenderMode::Vector) {
        render_vector(frame, e.viseme, tone, env, spec);
      } else {
        render_image(frame, e.viseme, tone, env, spec);
      }
    }
  }
  if (spec.noise_sigma > 0.0) {
    for (float& v : frames.data) v += static_cast<float>(rng.normal(0.0, spec.noise_sigma));
  }
  return frames;
}

}  // namespace lipcascade::synth
