// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace lipcascade::eval {

/// Substitutions, deletions and insertions turning a reference into a
/// hypothesis, with the reference length.
struct EditOps {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_length = 0;

  std::size_t distance() const { return substitutions + deletions + insertions; }
  bool operator==(const EditOps&) const = default;
};

/// Unit-cost Levenshtein alignment. Backtrace ties prefer substitution (or
/// match), then insertion, then deletion.
template <typename T>
EditOps edit_distance(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i, j - 1) + 1, at(i - 1, j) + 1});
    }
  }
  EditOps ops;
  ops.ref_length = n;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (!same) ++ops.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && at(i, j) == at(i, j - 1) + 1) {
      ++ops.insertions;
      --j;
    } else {
      ++ops.deletions;
      --i;
    }
  }
  return ops;
}

template <typename T>
EditOps edit_distance(const std::vector<T>& ref, const std::vector<T>& hyp) {
  return edit_distance(std::span<const T>(ref), std::span<const T>(hyp));
}

/// Pooled (S + D + I) / N accumulator.
struct RateAccumulator {
  std::size_t errors = 0;
  std::size_t ref_total = 0;

  void add(const EditOps& ops) {
    errors += ops.distance();
    ref_total += ops.ref_length;
  }
  /// Throws UndefinedRateError when no reference tokens were seen.
  double rate() const;
};

/// Corpus-level sum of edit operations over sum of reference lengths.
double error_rate(std::span<const EditOps> ops);

}  // namespace lipcascade::eval
