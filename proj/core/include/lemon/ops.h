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

#ifndef LEMON_OPS_H_
#define LEMON_OPS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "lemon/rng.h"
#include "lemon/tape.h"
#include "lemon/tensor.h"

namespace lemon::num {

// Raw kernels, C (+)= op(A) * op(B), all row-major.
void gemm(const Tensor& a, bool trans_a, const Tensor& b, bool trans_b,
          Tensor& c, bool accumulate);

Var matmul(Var a, Var b);
Var transpose(Var a);

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double s);
// a[r x c] + bias[c], bias broadcast over rows.
Var add_bias(Var a, Var bias);

Var tanh(Var x);
Var sigmoid(Var x);

// Softmax over the last dimension (each row of a matrix independently).
Var softmax(Var x);
Tensor softmax(const Tensor& x);

// Joins rank-1 tensors end to end.
Var concat(std::span<const Var> parts);
// Joins matrices with equal row counts side by side.
Var hconcat(std::span<const Var> parts);
// Stacks matrices with equal column counts.
Var vstack(std::span<const Var> parts);

Var slice_cols(Var a, std::size_t begin, std::size_t end);
Var select_rows(Var a, std::span<const std::size_t> rows);

// Embedding lookup. Backward scatters into table.grad() and marks the rows
// touched, so sparse tables only update what was read.
Var gather_rows(Tape& tape, Parameter& table,
                std::span<const std::size_t> rows);

// Inverted dropout. Identity when !training or rate == 0.
Var dropout(Var x, double rate, bool training, Rng& rng);

Var sum(Var x);

}  // namespace lemon::num

#endif  // LEMON_OPS_H_
