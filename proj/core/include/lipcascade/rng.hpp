// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace lipcascade {

/// Derives an independent substream seed from (seed, purpose label, index).
/// Every random draw in the project flows from one root seed through here.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                          std::uint64_t index = 0);

/// xoshiro256** generator with portable helpers. The distribution helpers are
/// implemented here rather than with <random> so that draws are identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);
  Rng(std::uint64_t seed, std::string_view label, std::uint64_t index = 0)
      : Rng(derive_seed(seed, label, index)) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);
  double normal(double mean = 0.0, double sigma = 1.0);
  bool bernoulli(double p) { return uniform() < p; }
  /// Draws an index from an unnormalised nonnegative weight vector.
  std::size_t categorical(std::span<const double> weights);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = uniform_index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t s_[4];
};

}  // namespace lipcascade
