// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/error.hpp"
#include "lipcascade/eval/metrics.hpp"

namespace lipcascade::eval {

double RateAccumulator::rate() const {
  if (ref_total == 0) throw UndefinedRateError("total reference length is zero");
  return static_cast<double>(errors) / static_cast<double>(ref_total);
}

double error_rate(std::span<const EditOps> ops) {
  RateAccumulator acc;
  for (const auto& o : ops) acc.add(o);
  return acc.rate();
}

}  // namespace lipcascade::eval
