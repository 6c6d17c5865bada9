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

#ifndef LEMON_ADAM_H_
#define LEMON_ADAM_H_

#include <cstddef>
#include <span>
#include <unordered_map>

#include "lemon/tape.h"
#include "lemon/tensor.h"

namespace lemon::num {

struct AdamOptions {
  double learning_rate = 1e-3;
  double weight_decay = 1e-7;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with decoupled weight decay. Sparse parameters (embedding tables)
// update only the rows touched since their last zero_grad(), and only those
// rows' moment estimates move; this mirrors a lazy/sparse Adam.
class Adam {
 public:
  explicit Adam(AdamOptions options = {}) : options_(options) {}

  const AdamOptions& options() const { return options_; }
  void set_learning_rate(double lr) { options_.learning_rate = lr; }

  // Applies one update to every non-frozen parameter. Throws NumericError
  // naming the parameter if any gradient entry is not finite; nothing is
  // modified in that case.
  void step(std::span<Parameter* const> params);

  std::size_t steps() const { return steps_; }

  const Tensor& first_moment(const Parameter& p) const;
  const Tensor& second_moment(const Parameter& p) const;

 private:
  struct Moments {
    Tensor first;
    Tensor second;
  };
  Moments& moments_for(Parameter& p);

  AdamOptions options_;
  std::size_t steps_ = 0;
  std::unordered_map<const Parameter*, Moments> moments_;
};

// Scales all gradients so their joint L2 norm is at most max_norm. Returns the
// norm before clipping. max_norm <= 0 disables clipping.
double clip_grad_norm(std::span<Parameter* const> params, double max_norm);

}  // namespace lemon::num

#endif  // LEMON_ADAM_H_
