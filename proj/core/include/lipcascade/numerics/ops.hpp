// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lipcascade/numerics/tensor.hpp"

namespace lipcascade::num {

using TokenId = int;

// Matrix product. Rank-1 operands are treated as a row vector on the left and
// a column vector on the right; the corresponding unit axis is dropped from
// the result: [k]x[k,n] -> [n], [m,k]x[k] -> [m].
Tensor matmul(const Tensor& a, const Tensor& b);

// Elementwise. Shapes must match, except that a rank-0 operand broadcasts.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor add_scalar(const Tensor& a, double offset);
Tensor sigmoid(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor relu(const Tensor& a);

/// [m,n] + [n] with the bias added to every row.
Tensor add_row_bias(const Tensor& m, const Tensor& bias);

/// Along the last axis, with max subtraction.
Tensor softmax(const Tensor& x);
Tensor log_softmax(const Tensor& x);

/// Rows of a [V,d] table; the result is [L,d] (possibly L = 0).
Tensor gather_rows(const Tensor& table, std::span<const TokenId> ids);

/// Concatenates rank-1 tensors.
Tensor concat(std::span<const Tensor> parts);
/// Stacks L rank-1 tensors of length d into [L,d].
Tensor stack_rows(std::span<const Tensor> rows, std::size_t width = 0);
/// Row i of a rank-2 tensor as a rank-1 tensor.
Tensor row(const Tensor& m, std::size_t i);
Tensor reshape(const Tensor& x, Shape shape);

/// Sum of all elements as a rank-0 tensor.
Tensor sum(const Tensor& x);
/// Column means of [m,n] -> [n].
Tensor mean_rows(const Tensor& m);

/// Negative log-likelihood summed over positions whose target is not pad_id.
Tensor nll_loss(const Tensor& log_probs, std::span<const TokenId> targets,
                TokenId pad_id);

/// Patch extraction for convolution over an [H,W,C] input. Output is
/// [H'*W', kh*kw*C], patches in row-major (y, x) order, each patch laid out
/// as (dy, dx, c).
Tensor im2col(const Tensor& x, std::size_t kernel_h, std::size_t kernel_w,
              std::size_t stride);

/// Index of the largest element (first on ties).
std::size_t argmax(std::span<const double> values);

}  // namespace lipcascade::num
