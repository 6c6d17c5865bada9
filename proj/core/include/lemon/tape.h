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

#ifndef LEMON_TAPE_H_
#define LEMON_TAPE_H_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "lemon/tensor.h"

namespace lemon::num {

// A learned tensor together with its gradient accumulator. Sparse parameters
// are embedding tables whose rows are only read through gather_rows(); they
// remember which rows received gradient so the optimizer can restrict its
// update to them.
class Parameter {
 public:
  Parameter() = default;
  Parameter(std::string name, Tensor value, bool sparse = false);

  const std::string& name() const { return name_; }
  bool sparse() const { return sparse_; }
  bool frozen() const { return frozen_; }
  void set_frozen(bool frozen) { frozen_ = frozen; }

  Tensor& value() { return value_; }
  const Tensor& value() const { return value_; }
  Tensor& grad() { return grad_; }
  const Tensor& grad() const { return grad_; }

  void touch_row(std::size_t row);
  void touch_all();
  // Rows with gradient since the last zero_grad(), in first-touch order.
  const std::vector<std::size_t>& touched_rows() const { return touched_; }
  bool row_touched(std::size_t row) const { return touched_mask_[row] != 0; }

  void zero_grad();

 private:
  std::string name_;
  Tensor value_;
  Tensor grad_;
  bool sparse_ = false;
  bool frozen_ = false;
  std::vector<std::size_t> touched_;
  std::vector<char> touched_mask_;
};

class Tape;

// Handle to a value recorded on a Tape.
struct Var {
  Tape* tape = nullptr;
  std::size_t id = 0;

  const Tensor& value() const;
  bool tracked() const;
};

// Define-by-run record of executed ops. Each node owns its forward value; the
// backward closure receives that value and the node's accumulated output
// gradient and adds into its inputs' gradients. Nodes are replayed in strict reverse order.
class Tape {
 public:
  using Backward =
      std::function<void(const Tensor& out_value, const Tensor& out_grad)>;

  // A tape with recording disabled never stores closures and never tracks
  // parameters; it is used for inference.
  explicit Tape(bool recording = true) : recording_(recording) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return recording_; }

  Var constant(Tensor value);
  // Leaf reading a parameter in place. Gradient accumulates into
  // param.grad() unless the parameter is frozen or the tape is not recording.
  Var param(Parameter& p);

  const Tensor& value(Var v) const;
  bool tracked(Var v) const { return nodes_[v.id].tracked; }
  Parameter* parameter(Var v) const { return nodes_[v.id].param; }

  // Gradient buffer of a tracked node, allocated on first use.
  Tensor& grad(Var v);

  // Records an op output. `tracked` is normally the OR over inputs.
  Var push(Tensor value, bool tracked, Backward backward);

  // Seeds d(loss)/d(loss) = seed and runs every closure in reverse order.
  void backward(Var loss, double seed = 1.0);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    Parameter* param = nullptr;
    bool tracked = false;
    bool has_grad = false;
    Backward backward;
  };

  std::vector<Node> nodes_;
  bool recording_;
};

inline const Tensor& Var::value() const { return tape->value(*this); }
inline bool Var::tracked() const { return tape->tracked(*this); }

}  // namespace lemon::num

#endif  // LEMON_TAPE_H_
