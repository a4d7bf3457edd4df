// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/numerics/tensor.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "lipcascade/error.hpp"

namespace lipcascade::num {
namespace {
thread_local bool g_grad_enabled = true;
}  // namespace

std::size_t numel(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string to_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

std::vector<double>& detail::Node::grad_buffer() {
  if (grad.empty()) grad.assign(value.size(), 0.0);
  return grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  auto node = std::make_shared<detail::Node>();
  node->value.assign(num::numel(shape), 0.0);
  node->shape = std::move(shape);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::from(Shape shape, std::vector<double> values,
                    bool requires_grad) {
  if (num::numel(shape) != values.size()) {
    throw ShapeError("shape " + to_string(shape) + " holds " +
                     std::to_string(num::numel(shape)) + " values, got " +
                     std::to_string(values.size()));
  }
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return from({}, {value}, requires_grad);
}

double Tensor::item() const {
  if (numel() != 1) {
    throw ShapeError("item() on non-scalar " + to_string(shape()));
  }
  return node_->value[0];
}

double Tensor::at(std::size_t i, std::size_t j) const {
  if (rank() != 2) throw ShapeError("at(i, j) on " + to_string(shape()));
  return node_->value.at(i * node_->shape[1] + j);
}

void Tensor::zero_grad() {
  std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

Tensor Tensor::detach_copy() const {
  return from(shape(), node_->value, false);
}

void backward(const Tensor& root) {
  if (!root.defined() || root.numel() != 1) {
    throw ShapeError("backward() needs a scalar root, got " +
                     (root.defined() ? to_string(root.shape()) : "undefined"));
  }
  detail::Node* root_node = root.node();
  if (!root_node->requires_grad) return;

  // Post-order DFS over interior nodes only; leaves may be shared across
  // graphs and are never marked.
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> seen;
  struct Frame {
    detail::Node* node;
    std::size_t next;
  };
  std::vector<Frame> stack;
  if (root_node->backward) {
    stack.push_back({root_node, 0});
    seen.insert(root_node);
  }
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next < top.node->inputs.size()) {
      detail::Node* child = top.node->inputs[top.next++].get();
      if (child->requires_grad && child->backward && !seen.count(child)) {
        seen.insert(child);
        stack.push_back({child, 0});
      }
    } else {
      order.push_back(top.node);
      stack.pop_back();
    }
  }

  for (detail::Node* n : order) n->grad.assign(n->value.size(), 0.0);
  root_node->grad_buffer()[0] += 1.0;
  if (!root_node->backward) return;

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    (*it)->backward(**it);
  }
}

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) {
  g_grad_enabled = false;
}

NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

}  // namespace lipcascade::num
