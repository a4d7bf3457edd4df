// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/numerics/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lipcascade/error.hpp"
#include "lipcascade/rng.hpp"

namespace lipcascade::num {
namespace {

double evaluate(const std::function<Tensor()>& loss_fn) {
  NoGradGuard guard;
  const double value = loss_fn().item();
  if (!std::isfinite(value)) throw NumericError("grad_check: loss is not finite");
  return value;
}

std::vector<std::size_t> pick_coords(std::size_t n, std::size_t limit,
                                     std::uint64_t seed, std::size_t which) {
  std::vector<std::size_t> coords(n);
  std::iota(coords.begin(), coords.end(), std::size_t{0});
  if (n <= limit) return coords;
  Rng rng(seed, "grad_check", which);
  rng.shuffle(std::span<std::size_t>(coords));
  coords.resize(limit);
  std::sort(coords.begin(), coords.end());
  return coords;
}

}  // namespace

double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

GradCheckReport grad_check(const std::function<Tensor()>& loss_fn,
                           std::span<const NamedTensor> params,
                           const GradCheckOptions& options) {
  for (const auto& p : params) {
    Tensor t = p.tensor;
    t.zero_grad();
  }
  Tensor loss = loss_fn();
  if (!std::isfinite(loss.item())) throw NumericError("grad_check: loss is not finite");
  backward(loss);
  std::vector<std::vector<double>> analytic;
  analytic.reserve(params.size());
  for (const auto& p : params) {
    if (p.tensor.has_grad()) {
      analytic.emplace_back(p.tensor.grad().begin(), p.tensor.grad().end());
    } else {
      analytic.emplace_back(p.tensor.numel(), 0.0);
    }
  }
  return grad_check_against(loss_fn, params, analytic, options);
}

GradCheckReport grad_check_against(const std::function<Tensor()>& loss_fn,
                                   std::span<const NamedTensor> params,
                                   std::span<const std::vector<double>> analytic,
                                   const GradCheckOptions& options) {
  GradCheckReport report;
  report.eps = options.eps;
  report.tol = options.tol;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Tensor t = params[pi].tensor;
    auto values = t.data();
    ParamGradError entry{.name = params[pi].name};
    for (std::size_t idx : pick_coords(values.size(), options.max_coords,
                                       options.seed, pi)) {
      const double saved = values[idx];
      values[idx] = saved + options.eps;
      const double up = evaluate(loss_fn);
      values[idx] = saved - options.eps;
      const double down = evaluate(loss_fn);
      values[idx] = saved;
      const double numeric = (up - down) / (2.0 * options.eps);
      const double a = analytic[pi][idx];
      const double rel = relative_error(a, numeric);
      entry.max_rel_error = std::max(entry.max_rel_error, rel);
      entry.max_abs_error = std::max(entry.max_abs_error, std::abs(a - numeric));
      if (rel > options.tol) {
        ++entry.coords_failed;
        entry.max_failed_grad = std::max(entry.max_failed_grad, std::abs(a));
      }
      ++entry.coords_checked;
    }
    report.max_rel_error = std::max(report.max_rel_error, entry.max_rel_error);
    report.max_abs_error = std::max(report.max_abs_error, entry.max_abs_error);
    report.coords_checked += entry.coords_checked;
    report.coords_failed += entry.coords_failed;
    report.max_failed_grad = std::max(report.max_failed_grad, entry.max_failed_grad);
    report.params.push_back(std::move(entry));
  }
  report.pass = report.max_rel_error <= options.tol;
  return report;
}

}  // namespace lipcascade::num
