/* Copyright 2026 The lemon-ner Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "lemon/tape.h"

#include <algorithm>

#include "lemon/error.h"

namespace lemon::num {

Parameter::Parameter(std::string name, Tensor value, bool sparse)
    : name_(std::move(name)),
      value_(std::move(value)),
      grad_(Tensor::zeros_like(value_)),
      sparse_(sparse),
      touched_mask_(value_.rows(), 0) {}

void Parameter::touch_row(std::size_t row) {
  if (!touched_mask_[row]) {
    touched_mask_[row] = 1;
    touched_.push_back(row);
  }
}

void Parameter::touch_all() {
  for (std::size_t r = 0; r < value_.rows(); ++r) touch_row(r);
}

void Parameter::zero_grad() {
  if (sparse_) {
    const std::size_t cols = grad_.cols();
    for (std::size_t r : touched_) {
      std::fill_n(grad_.data() + r * cols, cols, 0.0);
    }
  } else {
    grad_.fill(0.0);
  }
  for (std::size_t r : touched_) touched_mask_[r] = 0;
  touched_.clear();
}

Var Tape::constant(Tensor value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var{this, nodes_.size() - 1};
}

Var Tape::param(Parameter& p) {
  Node node;
  node.param = &p;
  node.tracked = recording_ && !p.frozen();
  if (node.tracked) p.touch_all();
  nodes_.push_back(std::move(node));
  return Var{this, nodes_.size() - 1};
}

const Tensor& Tape::value(Var v) const {
  const Node& node = nodes_[v.id];
  return node.param ? node.param->value() : node.value;
}

Tensor& Tape::grad(Var v) {
  Node& node = nodes_[v.id];
  if (node.param) return node.param->grad();
  if (!node.has_grad) {
    node.grad = Tensor::zeros_like(node.value);
    node.has_grad = true;
  }
  return node.grad;
}

Var Tape::push(Tensor value, bool tracked, Backward backward) {
  Node node;
  node.value = std::move(value);
  node.tracked = recording_ && tracked;
  if (node.tracked) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{this, nodes_.size() - 1};
}

void Tape::backward(Var loss, double seed) {
  if (!recording_) throw UsageError("backward() on a non-recording tape");
  if (value(loss).size() != 1) {
    throw DimensionError("backward() needs a scalar loss, got " +
                         shape_string(value(loss).shape()));
  }
  if (!tracked(loss)) return;
  grad(loss)[0] += seed;
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    Node& node = nodes_[i];
    if (node.tracked && node.has_grad && node.backward) {
      node.backward(node.value, node.grad);
    }
  }
}

}  // namespace lemon::num
