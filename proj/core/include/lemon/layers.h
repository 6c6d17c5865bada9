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

#ifndef LEMON_LAYERS_H_
#define LEMON_LAYERS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "lemon/tape.h"

namespace lemon {

struct Attention {
  num::Var context;  // [1 x d_m]
  num::Var weights;  // [1 x n_m]
};

// Scaled bilinear attention of one fragment f [1 x d_f] over its memory
// M [n_m x d_m] with W [d_f x d_m], composed from generic tape ops.
Attention attend(num::Var f, num::Var memory, num::Var w);

// The same attention for many fragments at once. queries [S x d_m] are the
// rows f W; fragment s attends over memory rows offsets[s]..offsets[s+1].
// When `weights` is given it receives the flattened attention weights,
// aligned with the memory rows.
num::Var segmented_attention(num::Var queries, num::Var memory,
                             std::span<const std::size_t> offsets,
                             std::vector<double>* weights = nullptr);

// -alpha (1 - p_t)^gamma log p_t with p_t clamped to [1e-12, 1]. Throws
// DomainError when true_class is out of range.
double focal_loss(std::span<const double> probs, std::size_t true_class, double alpha,
                  double gamma);

// Sum over rows of weight_s * focal loss of softmax(logits_s), with
// alpha_t = exp(log_alpha[t]). Empty `weights` means all ones.
num::Var focal_loss(num::Var logits, std::span<const std::size_t> labels,
                    num::Var log_alpha, double gamma,
                    std::span<const double> weights = {});

// Sum over rows of weight_s * (logsumexp(logits_s) - logits_s[label_s]).
num::Var cross_entropy(num::Var logits, std::span<const std::size_t> labels,
                       std::span<const double> weights = {});

}  // namespace lemon

#endif  // LEMON_LAYERS_H_
