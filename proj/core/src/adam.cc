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

#include "lemon/adam.h"

#include <cmath>
#include <string>

#include "lemon/error.h"

namespace lemon::num {
namespace {

template <typename Fn>
void for_each_grad_row(const Parameter& p, Fn&& fn) {
  const std::size_t rows = p.value().rows();
  if (p.sparse()) {
    for (std::size_t r : p.touched_rows()) fn(r);
  } else {
    for (std::size_t r = 0; r < rows; ++r) fn(r);
  }
}

}  // namespace

Adam::Moments& Adam::moments_for(Parameter& p) {
  auto it = moments_.find(&p);
  if (it == moments_.end()) {
    it = moments_
             .emplace(&p, Moments{Tensor::zeros_like(p.value()),
                                  Tensor::zeros_like(p.value())})
             .first;
  }
  return it->second;
}

const Tensor& Adam::first_moment(const Parameter& p) const {
  return moments_.at(&p).first;
}

const Tensor& Adam::second_moment(const Parameter& p) const {
  return moments_.at(&p).second;
}

void Adam::step(std::span<Parameter* const> params) {
  for (const Parameter* p : params) {
    if (p->frozen()) continue;
    const std::size_t cols = p->value().cols();
    const Tensor& g = p->grad();
    for_each_grad_row(*p, [&](std::size_t r) {
      for (std::size_t j = 0; j < cols; ++j) {
        if (!std::isfinite(g[r * cols + j])) {
          throw NumericError("non-finite gradient in parameter '" + p->name() +
                             "' at row " + std::to_string(r));
        }
      }
    });
  }

  ++steps_;
  const double t = static_cast<double>(steps_);
  const double lr = options_.learning_rate;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double bias1 = 1.0 - std::pow(b1, t);
  const double bias2_sqrt = std::sqrt(1.0 - std::pow(b2, t));
  const double decay = 1.0 - lr * options_.weight_decay;

  for (Parameter* p : params) {
    if (p->frozen()) continue;
    Moments& mom = moments_for(*p);
    Tensor& w = p->value();
    const Tensor& g = p->grad();
    const std::size_t cols = w.cols();
    for_each_grad_row(*p, [&](std::size_t r) {
      for (std::size_t j = 0; j < cols; ++j) {
        const std::size_t i = r * cols + j;
        mom.first[i] = b1 * mom.first[i] + (1.0 - b1) * g[i];
        mom.second[i] = b2 * mom.second[i] + (1.0 - b2) * g[i] * g[i];
        const double denom = std::sqrt(mom.second[i]) / bias2_sqrt + options_.epsilon;
        w[i] = w[i] * decay - (lr / bias1) * mom.first[i] / denom;
      }
    });
  }
}

double clip_grad_norm(std::span<Parameter* const> params, double max_norm) {
  double total = 0.0;
  for (const Parameter* p : params) {
    if (p->frozen()) continue;
    const std::size_t cols = p->value().cols();
    const Tensor& g = p->grad();
    for_each_grad_row(*p, [&](std::size_t r) {
      for (std::size_t j = 0; j < cols; ++j) total += g[r * cols + j] * g[r * cols + j];
    });
  }
  const double norm = std::sqrt(total);
  if (max_norm > 0.0 && norm > max_norm) {
    const double factor = max_norm / norm;
    for (Parameter* p : params) {
      if (p->frozen()) continue;
      const std::size_t cols = p->value().cols();
      Tensor& g = p->grad();
      for_each_grad_row(*p, [&](std::size_t r) {
        for (std::size_t j = 0; j < cols; ++j) g[r * cols + j] *= factor;
      });
    }
  }
  return norm;
}

}  // namespace lemon::num
