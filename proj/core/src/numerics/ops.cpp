// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/numerics/ops.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>

#include "lipcascade/error.hpp"

namespace lipcascade::num {
namespace {

using detail::Node;

/// Allocates an output node and wires inputs when gradients are required.
Tensor make_result(Shape shape, std::initializer_list<const Tensor*> inputs) {
  Tensor out = Tensor::zeros(std::move(shape));
  if (!grad_enabled()) return out;
  bool needs = false;
  for (const Tensor* t : inputs) needs = needs || t->requires_grad();
  if (!needs) return out;
  Node* n = out.node();
  n->requires_grad = true;
  n->inputs.reserve(inputs.size());
  for (const Tensor* t : inputs) n->inputs.push_back(t->node_ptr());
  return out;
}

void require_defined(const Tensor& t, const char* op) {
  if (!t.defined()) throw ShapeError(std::string(op) + ": undefined operand");
}

struct MatView {
  std::size_t rows;
  std::size_t cols;
};

// c[m,n] += a[m,k] * b[k,n]
void gemm_nn(const double* a, const double* b, double* c, std::size_t m,
             std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    const double* ai = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ai[p];
      if (av == 0.0) continue;
      const double* bp = b + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

// c[m,k] += g[m,n] * b[k,n]^T
void gemm_nt(const double* g, const double* b, double* c, std::size_t m,
             std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* gi = g + i * n;
    double* ci = c + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double* bp = b + p * n;
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += gi[j] * bp[j];
      ci[p] += acc;
    }
  }
}

// c[k,n] += a[m,k]^T * g[m,n]
void gemm_tn(const double* a, const double* g, double* c, std::size_t m,
             std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    const double* gi = g + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ai[p];
      if (av == 0.0) continue;
      double* cp = c + p * n;
      for (std::size_t j = 0; j < n; ++j) cp[j] += av * gi[j];
    }
  }
}

enum class Binary { Add, Sub, Mul };

Tensor binary(const Tensor& a, const Tensor& b, Binary kind, const char* name) {
  require_defined(a, name);
  require_defined(b, name);
  const bool a_scalar = a.rank() == 0;
  const bool b_scalar = b.rank() == 0;
  if (a.shape() != b.shape() && !a_scalar && !b_scalar) {
    throw ShapeError(std::string(name) + ": " + to_string(a.shape()) + " vs " +
                     to_string(b.shape()));
  }
  const Shape& shape = (a_scalar && !b_scalar) ? b.shape() : a.shape();
  Tensor out = make_result(shape, {&a, &b});
  const std::size_t n = out.numel();
  const auto av = a.data();
  const auto bv = b.data();
  auto ov = out.data();
  const std::size_t sa = a_scalar ? 0 : 1;
  const std::size_t sb = b_scalar ? 0 : 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = av[i * sa];
    const double y = bv[i * sb];
    switch (kind) {
      case Binary::Add: ov[i] = x + y; break;
      case Binary::Sub: ov[i] = x - y; break;
      case Binary::Mul: ov[i] = x * y; break;
    }
  }
  if (out.requires_grad()) {
    out.node()->backward = [kind, sa, sb](Node& self) {
      Node& an = *self.inputs[0];
      Node& bn = *self.inputs[1];
      const std::size_t n = self.value.size();
      if (an.requires_grad) {
        auto& ga = an.grad_buffer();
        for (std::size_t i = 0; i < n; ++i) {
          const double g = self.grad[i];
          ga[i * sa] += kind == Binary::Mul ? g * bn.value[i * sb] : g;
        }
      }
      if (bn.requires_grad) {
        auto& gb = bn.grad_buffer();
        for (std::size_t i = 0; i < n; ++i) {
          const double g = self.grad[i];
          switch (kind) {
            case Binary::Add: gb[i * sb] += g; break;
            case Binary::Sub: gb[i * sb] -= g; break;
            case Binary::Mul: gb[i * sb] += g * an.value[i * sa]; break;
          }
        }
      }
    };
  }
  return out;
}

template <typename Fwd, typename Deriv>
Tensor unary(const Tensor& a, Fwd fwd, Deriv deriv) {
  require_defined(a, "unary");
  Tensor out = make_result(a.shape(), {&a});
  const auto av = a.data();
  auto ov = out.data();
  for (std::size_t i = 0; i < av.size(); ++i) ov[i] = fwd(av[i]);
  if (out.requires_grad()) {
    // deriv(input, output) -> d output / d input
    out.node()->backward = [deriv](Node& self) {
      Node& an = *self.inputs[0];
      auto& ga = an.grad_buffer();
      for (std::size_t i = 0; i < self.value.size(); ++i) {
        ga[i] += self.grad[i] * deriv(an.value[i], self.value[i]);
      }
    };
  }
  return out;
}

std::size_t last_dim(const Tensor& x) {
  return x.rank() == 0 ? 1 : x.shape().back();
}

}  // namespace

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_defined(a, "matmul");
  require_defined(b, "matmul");
  if (a.rank() < 1 || a.rank() > 2 || b.rank() < 1 || b.rank() > 2 ||
      (a.rank() == 1 && b.rank() == 1)) {
    throw ShapeError("matmul: unsupported ranks " + to_string(a.shape()) +
                     " x " + to_string(b.shape()));
  }
  const MatView av{a.rank() == 1 ? 1 : a.dim(0), a.shape().back()};
  const MatView bv{b.dim(0), b.rank() == 1 ? 1 : b.dim(1)};
  if (av.cols != bv.rows) {
    throw ShapeError("matmul: inner dimensions disagree for " +
                     to_string(a.shape()) + " x " + to_string(b.shape()));
  }
  Shape shape;
  if (a.rank() == 2) shape.push_back(av.rows);
  if (b.rank() == 2) shape.push_back(bv.cols);
  Tensor out = make_result(shape, {&a, &b});
  const std::size_t m = av.rows, k = av.cols, n = bv.cols;
  gemm_nn(a.data().data(), b.data().data(), out.data().data(), m, k, n);
  if (out.requires_grad()) {
    out.node()->backward = [m, k, n](Node& self) {
      Node& an = *self.inputs[0];
      Node& bn = *self.inputs[1];
      if (an.requires_grad) {
        gemm_nt(self.grad.data(), bn.value.data(), an.grad_buffer().data(), m,
                k, n);
      }
      if (bn.requires_grad) {
        gemm_tn(an.value.data(), self.grad.data(), bn.grad_buffer().data(), m,
                k, n);
      }
    };
  }
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) { return binary(a, b, Binary::Add, "add"); }
Tensor sub(const Tensor& a, const Tensor& b) { return binary(a, b, Binary::Sub, "sub"); }
Tensor mul(const Tensor& a, const Tensor& b) { return binary(a, b, Binary::Mul, "mul"); }

Tensor scale(const Tensor& a, double factor) {
  return unary(
      a, [factor](double x) { return factor * x; },
      [factor](double, double) { return factor; });
}

Tensor add_scalar(const Tensor& a, double offset) {
  return unary(
      a, [offset](double x) { return x + offset; },
      [](double, double) { return 1.0; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(
      a,
      [](double x) {
        if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh(const Tensor& a) {
  return unary(
      a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Tensor relu(const Tensor& a) {
  return unary(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor add_row_bias(const Tensor& m, const Tensor& bias) {
  require_defined(m, "add_row_bias");
  require_defined(bias, "add_row_bias");
  if (m.rank() != 2 || bias.rank() != 1 || bias.dim(0) != m.dim(1)) {
    throw ShapeError("add_row_bias: " + to_string(m.shape()) + " + " +
                     to_string(bias.shape()));
  }
  Tensor out = make_result(m.shape(), {&m, &bias});
  const std::size_t rows = m.dim(0), cols = m.dim(1);
  const auto mv = m.data();
  const auto bv = bias.data();
  auto ov = out.data();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      ov[i * cols + j] = mv[i * cols + j] + bv[j];
    }
  }
  if (out.requires_grad()) {
    out.node()->backward = [rows, cols](Node& self) {
      Node& mn = *self.inputs[0];
      Node& bn = *self.inputs[1];
      if (mn.requires_grad) {
        auto& gm = mn.grad_buffer();
        for (std::size_t i = 0; i < self.grad.size(); ++i) gm[i] += self.grad[i];
      }
      if (bn.requires_grad) {
        auto& gb = bn.grad_buffer();
        for (std::size_t i = 0; i < rows; ++i) {
          for (std::size_t j = 0; j < cols; ++j) gb[j] += self.grad[i * cols + j];
        }
      }
    };
  }
  return out;
}

namespace {

Tensor softmax_impl(const Tensor& x, bool log_space) {
  require_defined(x, "softmax");
  const std::size_t n = last_dim(x);
  if (n == 0) throw ShapeError("softmax over an empty axis");
  Tensor out = make_result(x.shape(), {&x});
  const auto xv = x.data();
  auto ov = out.data();
  const std::size_t rows = xv.size() / n;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* in = xv.data() + r * n;
    double* o = ov.data() + r * n;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isnan(in[j])) throw NumericError("softmax input contains NaN");
      mx = std::max(mx, in[j]);
    }
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += std::exp(in[j] - mx);
    if (log_space) {
      const double lse = mx + std::log(total);
      for (std::size_t j = 0; j < n; ++j) o[j] = in[j] - lse;
    } else {
      for (std::size_t j = 0; j < n; ++j) o[j] = std::exp(in[j] - mx) / total;
    }
  }
  if (out.requires_grad()) {
    out.node()->backward = [n, rows, log_space](Node& self) {
      Node& xn = *self.inputs[0];
      auto& gx = xn.grad_buffer();
      for (std::size_t r = 0; r < rows; ++r) {
        const double* y = self.value.data() + r * n;
        const double* g = self.grad.data() + r * n;
        double* dx = gx.data() + r * n;
        if (log_space) {
          double gsum = 0.0;
          for (std::size_t j = 0; j < n; ++j) gsum += g[j];
          for (std::size_t j = 0; j < n; ++j) dx[j] += g[j] - std::exp(y[j]) * gsum;
        } else {
          double dot = 0.0;
          for (std::size_t j = 0; j < n; ++j) dot += g[j] * y[j];
          for (std::size_t j = 0; j < n; ++j) dx[j] += y[j] * (g[j] - dot);
        }
      }
    };
  }
  return out;
}

}  // namespace

Tensor softmax(const Tensor& x) { return softmax_impl(x, false); }
Tensor log_softmax(const Tensor& x) { return softmax_impl(x, true); }

Tensor gather_rows(const Tensor& table, std::span<const TokenId> ids) {
  require_defined(table, "gather_rows");
  if (table.rank() != 2) {
    throw ShapeError("gather_rows: table must be rank 2, got " +
                     to_string(table.shape()));
  }
  const std::size_t vocab = table.dim(0), width = table.dim(1);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= vocab) {
      throw IndexError("gather_rows: id " + std::to_string(ids[i]) +
                       " at position " + std::to_string(i) +
                       " out of range for table of " + std::to_string(vocab) +
                       " rows");
    }
  }
  Tensor out = make_result({ids.size(), width}, {&table});
  const auto tv = table.data();
  auto ov = out.data();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::copy_n(tv.data() + static_cast<std::size_t>(ids[i]) * width, width,
                ov.data() + i * width);
  }
  if (out.requires_grad()) {
    std::vector<TokenId> kept(ids.begin(), ids.end());
    out.node()->backward = [kept = std::move(kept), width](Node& self) {
      auto& gt = self.inputs[0]->grad_buffer();
      for (std::size_t i = 0; i < kept.size(); ++i) {
        double* dst = gt.data() + static_cast<std::size_t>(kept[i]) * width;
        const double* src = self.grad.data() + i * width;
        for (std::size_t j = 0; j < width; ++j) dst[j] += src[j];
      }
    };
  }
  return out;
}

Tensor concat(std::span<const Tensor> parts) {
  std::size_t total = 0;
  bool needs = false;
  for (const auto& p : parts) {
    require_defined(p, "concat");
    if (p.rank() != 1) {
      throw ShapeError("concat expects rank-1 parts, got " + to_string(p.shape()));
    }
    total += p.numel();
    needs = needs || p.requires_grad();
  }
  Tensor out = Tensor::zeros({total});
  auto ov = out.data();
  std::size_t offset = 0;
  for (const auto& p : parts) {
    std::copy(p.data().begin(), p.data().end(), ov.begin() + offset);
    offset += p.numel();
  }
  if (needs && grad_enabled()) {
    Node* n = out.node();
    n->requires_grad = true;
    for (const auto& p : parts) n->inputs.push_back(p.node_ptr());
    n->backward = [](Node& self) {
      std::size_t offset = 0;
      for (auto& in : self.inputs) {
        const std::size_t len = in->value.size();
        if (in->requires_grad) {
          auto& g = in->grad_buffer();
          for (std::size_t j = 0; j < len; ++j) g[j] += self.grad[offset + j];
        }
        offset += len;
      }
    };
  }
  return out;
}

Tensor stack_rows(std::span<const Tensor> rows, std::size_t width) {
  if (!rows.empty()) width = rows.front().numel();
  bool needs = false;
  for (const auto& r : rows) {
    require_defined(r, "stack_rows");
    if (r.rank() != 1 || r.numel() != width) {
      throw ShapeError("stack_rows: row " + to_string(r.shape()) +
                       " does not match width " + std::to_string(width));
    }
    needs = needs || r.requires_grad();
  }
  Tensor out = Tensor::zeros({rows.size(), width});
  auto ov = out.data();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(rows[i].data().begin(), rows[i].data().end(), ov.begin() + i * width);
  }
  if (needs && grad_enabled()) {
    Node* n = out.node();
    n->requires_grad = true;
    for (const auto& r : rows) n->inputs.push_back(r.node_ptr());
    n->backward = [width](Node& self) {
      for (std::size_t i = 0; i < self.inputs.size(); ++i) {
        Node& in = *self.inputs[i];
        if (!in.requires_grad) continue;
        auto& g = in.grad_buffer();
        for (std::size_t j = 0; j < width; ++j) g[j] += self.grad[i * width + j];
      }
    };
  }
  return out;
}

Tensor row(const Tensor& m, std::size_t i) {
  require_defined(m, "row");
  if (m.rank() != 2 || i >= m.dim(0)) {
    throw IndexError("row " + std::to_string(i) + " of " + to_string(m.shape()));
  }
  const std::size_t width = m.dim(1);
  Tensor out = make_result({width}, {&m});
  std::copy_n(m.data().begin() + i * width, width, out.data().begin());
  if (out.requires_grad()) {
    out.node()->backward = [i, width](Node& self) {
      auto& g = self.inputs[0]->grad_buffer();
      for (std::size_t j = 0; j < width; ++j) g[i * width + j] += self.grad[j];
    };
  }
  return out;
}

Tensor reshape(const Tensor& x, Shape shape) {
  require_defined(x, "reshape");
  if (numel(shape) != x.numel()) {
    throw ShapeError("reshape " + to_string(x.shape()) + " -> " + to_string(shape));
  }
  Tensor out = make_result(std::move(shape), {&x});
  std::copy(x.data().begin(), x.data().end(), out.data().begin());
  if (out.requires_grad()) {
    out.node()->backward = [](Node& self) {
      auto& g = self.inputs[0]->grad_buffer();
      for (std::size_t j = 0; j < self.grad.size(); ++j) g[j] += self.grad[j];
    };
  }
  return out;
}

Tensor sum(const Tensor& x) {
  require_defined(x, "sum");
  Tensor out = make_result({}, {&x});
  double total = 0.0;
  for (double v : x.data()) total += v;
  out.data()[0] = total;
  if (out.requires_grad()) {
    out.node()->backward = [](Node& self) {
      auto& g = self.inputs[0]->grad_buffer();
      for (double& v : g) v += self.grad[0];
    };
  }
  return out;
}

Tensor mean_rows(const Tensor& m) {
  require_defined(m, "mean_rows");
  if (m.rank() != 2 || m.dim(0) == 0) {
    throw ShapeError("mean_rows needs a non-empty rank-2 tensor, got " +
                     to_string(m.shape()));
  }
  const std::size_t rows = m.dim(0), cols = m.dim(1);
  Tensor out = make_result({cols}, {&m});
  auto ov = out.data();
  const auto mv = m.data();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) ov[j] += mv[i * cols + j];
  }
  for (double& v : ov) v /= static_cast<double>(rows);
  if (out.requires_grad()) {
    out.node()->backward = [rows, cols](Node& self) {
      auto& g = self.inputs[0]->grad_buffer();
      const double inv = 1.0 / static_cast<double>(rows);
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) g[i * cols + j] += self.grad[j] * inv;
      }
    };
  }
  return out;
}

Tensor nll_loss(const Tensor& log_probs, std::span<const TokenId> targets,
                TokenId pad_id) {
  require_defined(log_probs, "nll_loss");
  if (log_probs.rank() != 2 || log_probs.dim(0) != targets.size()) {
    throw ShapeError("nll_loss: log_probs " + to_string(log_probs.shape()) +
                     " vs " + std::to_string(targets.size()) + " targets");
  }
  const std::size_t vocab = log_probs.dim(1);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] == pad_id) continue;
    if (targets[i] < 0 || static_cast<std::size_t>(targets[i]) >= vocab) {
      throw IndexError("nll_loss: target " + std::to_string(targets[i]) +
                       " at position " + std::to_string(i) +
                       " out of range for " + std::to_string(vocab) + " classes");
    }
  }
  Tensor out = make_result({}, {&log_probs});
  const auto lp = log_probs.data();
  double total = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] == pad_id) continue;
    total -= lp[i * vocab + static_cast<std::size_t>(targets[i])];
  }
  out.data()[0] = total;
  if (out.requires_grad()) {
    std::vector<TokenId> kept(targets.begin(), targets.end());
    out.node()->backward = [kept = std::move(kept), vocab, pad_id](Node& self) {
      auto& g = self.inputs[0]->grad_buffer();
      for (std::size_t i = 0; i < kept.size(); ++i) {
        if (kept[i] == pad_id) continue;
        g[i * vocab + static_cast<std::size_t>(kept[i])] -= self.grad[0];
      }
    };
  }
  return out;
}

Tensor im2col(const Tensor& x, std::size_t kernel_h, std::size_t kernel_w,
              std::size_t stride) {
  require_defined(x, "im2col");
  if (x.rank() != 3 || stride == 0 || kernel_h == 0 || kernel_w == 0 ||
      x.dim(0) < kernel_h || x.dim(1) < kernel_w) {
    throw ShapeError("im2col: input " + to_string(x.shape()) + " kernel " +
                     std::to_string(kernel_h) + "x" + std::to_string(kernel_w) +
                     " stride " + std::to_string(stride));
  }
  const std::size_t h = x.dim(0), w = x.dim(1), c = x.dim(2);
  const std::size_t oh = (h - kernel_h) / stride + 1;
  const std::size_t ow = (w - kernel_w) / stride + 1;
  const std::size_t patch = kernel_h * kernel_w * c;
  Tensor out = make_result({oh * ow, patch}, {&x});
  const auto xv = x.data();
  auto ov = out.data();
  // Output element -> input element mapping, reused by the backward pass.
  auto for_each = [=](auto&& fn) {
    for (std::size_t oy = 0; oy < oh; ++oy) {
      for (std::size_t ox = 0; ox < ow; ++ox) {
        const std::size_t r = oy * ow + ox;
        for (std::size_t dy = 0; dy < kernel_h; ++dy) {
          const std::size_t src_row = ((oy * stride + dy) * w + ox * stride) * c;
          const std::size_t dst = r * patch + dy * kernel_w * c;
          for (std::size_t k = 0; k < kernel_w * c; ++k) fn(dst + k, src_row + k);
        }
      }
    }
  };
  for_each([&](std::size_t dst, std::size_t src) { ov[dst] = xv[src]; });
  if (out.requires_grad()) {
    out.node()->backward = [for_each](Node& self) {
      auto& g = self.inputs[0]->grad_buffer();
      for_each([&](std::size_t dst, std::size_t src) { g[src] += self.grad[dst]; });
    };
  }
  return out;
}

}  // namespace lipcascade::num
