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

#include "lemon/layers.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include "lemon/error.h"
#include "lemon/ops.h"

namespace lemon {
namespace {

using num::Tensor;
using num::Var;

constexpr double kMinProb = 1e-12;

void check_labels(const Tensor& logits, std::span<const std::size_t> labels,
                  std::span<const double> weights, const char* op) {
  if (labels.size() != logits.rows() || (!weights.empty() && weights.size() != labels.size())) {
    throw DimensionError(std::string(op) + ": " + std::to_string(labels.size()) +
                         " labels for logits " + num::shape_string(logits.shape()));
  }
  for (std::size_t t : labels) {
    if (t >= logits.cols()) {
      throw DomainError(std::string(op) + ": class " + std::to_string(t) + " out of " +
                        std::to_string(logits.cols()));
    }
  }
}

}  // namespace

Attention attend(Var f, Var memory, Var w) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(memory.value().cols()));
  Var scores = num::scale(num::matmul(num::matmul(f, w), num::transpose(memory)), scale);
  Var weights = num::softmax(scores);
  return {num::matmul(weights, memory), weights};
}

Var segmented_attention(Var queries, Var memory, std::span<const std::size_t> offsets,
                        std::vector<double>* weights) {
  const Tensor& Q = queries.value();
  const Tensor& M = memory.value();
  const std::size_t d = Q.cols();
  if (M.cols() != d || offsets.size() != Q.rows() + 1 || offsets.back() != M.rows()) {
    throw DimensionError("segmented_attention: queries " + num::shape_string(Q.shape()) +
                         " and memory " + num::shape_string(M.shape()) +
                         " do not match the segment offsets");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  auto a = std::make_shared<std::vector<double>>(M.rows());
  Tensor out({Q.rows(), d});
  for (std::size_t s = 0; s < Q.rows(); ++s) {
    const std::size_t lo = offsets[s], hi = offsets[s + 1];
    if (lo >= hi) throw DimensionError("segmented_attention: empty memory segment");
    const double* q = Q.data() + s * d;
    double top = -INFINITY;
    for (std::size_t r = lo; r < hi; ++r) {
      const double* m = M.data() + r * d;
      double dot = 0.0;
      for (std::size_t c = 0; c < d; ++c) dot += q[c] * m[c];
      (*a)[r] = dot * scale;
      top = std::max(top, (*a)[r]);
    }
    double total = 0.0;
    for (std::size_t r = lo; r < hi; ++r) {
      (*a)[r] = std::exp((*a)[r] - top);
      total += (*a)[r];
    }
    double* o = out.data() + s * d;
    for (std::size_t r = lo; r < hi; ++r) {
      (*a)[r] /= total;
      const double* m = M.data() + r * d;
      for (std::size_t c = 0; c < d; ++c) o[c] += (*a)[r] * m[c];
    }
  }
  if (weights) *weights = *a;
  std::vector<std::size_t> segs(offsets.begin(), offsets.end());
  return queries.tape->push(
      std::move(out), queries.tracked() || memory.tracked(),
      [queries, memory, a, segs, d, scale](const Tensor&, const Tensor& g) {
        num::Tape& tape = *queries.tape;
        const Tensor& Q = queries.value();
        const Tensor& M = memory.value();
        Tensor* gq = queries.tracked() ? &tape.grad(queries) : nullptr;
        Tensor* gm = memory.tracked() ? &tape.grad(memory) : nullptr;
        std::vector<double> da;
        for (std::size_t s = 0; s + 1 < segs.size(); ++s) {
          const std::size_t lo = segs[s], hi = segs[s + 1];
          const double* gs = g.data() + s * d;
          da.assign(hi - lo, 0.0);
          double mean = 0.0;
          for (std::size_t r = lo; r < hi; ++r) {
            const double* m = M.data() + r * d;
            double dot = 0.0;
            for (std::size_t c = 0; c < d; ++c) dot += gs[c] * m[c];
            da[r - lo] = dot;
            mean += (*a)[r] * dot;
          }
          const double* q = Q.data() + s * d;
          for (std::size_t r = lo; r < hi; ++r) {
            const double ds = (*a)[r] * (da[r - lo] - mean) * scale;
            const double* m = M.data() + r * d;
            if (gq) {
              double* dq = gq->data() + s * d;
              for (std::size_t c = 0; c < d; ++c) dq[c] += ds * m[c];
            }
            if (gm) {
              double* dm = gm->data() + r * d;
              for (std::size_t c = 0; c < d; ++c) dm[c] += (*a)[r] * gs[c] + ds * q[c];
            }
          }
        }
      });
}

double focal_loss(std::span<const double> probs, std::size_t true_class, double alpha,
                  double gamma) {
  if (true_class >= probs.size()) {
    throw DomainError("focal_loss: class " + std::to_string(true_class) + " out of " +
                      std::to_string(probs.size()));
  }
  const double pt = std::clamp(probs[true_class], kMinProb, 1.0);
  return -alpha * std::pow(1.0 - pt, gamma) * std::log(pt);
}

Var focal_loss(Var logits, std::span<const std::size_t> labels, Var log_alpha, double gamma,
               std::span<const double> weights) {
  const Tensor& Z = logits.value();
  check_labels(Z, labels, weights, "focal_loss");
  if (log_alpha.value().size() != Z.cols()) {
    throw DimensionError("focal_loss: alpha " + num::shape_string(log_alpha.value().shape()) +
                         " for " + std::to_string(Z.cols()) + " classes");
  }
  const std::size_t S = Z.rows(), C = Z.cols();
  auto probs = std::make_shared<Tensor>(num::softmax(Z));
  auto per_row = std::make_shared<std::vector<double>>(S);
  double total = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    const double alpha = std::exp(log_alpha.value()[labels[s]]);
    (*per_row)[s] = focal_loss(probs->row(s), labels[s], alpha, gamma);
    total += (weights.empty() ? 1.0 : weights[s]) * (*per_row)[s];
  }
  std::vector<std::size_t> y(labels.begin(), labels.end());
  std::vector<double> w(weights.begin(), weights.end());
  return logits.tape->push(
      Tensor::vector({total}), logits.tracked() || log_alpha.tracked(),
      [logits, log_alpha, gamma, probs, per_row, y, w, S, C](const Tensor&, const Tensor& g) {
        num::Tape& tape = *logits.tape;
        Tensor* gz = logits.tracked() ? &tape.grad(logits) : nullptr;
        Tensor* ga = log_alpha.tracked() ? &tape.grad(log_alpha) : nullptr;
        for (std::size_t s = 0; s < S; ++s) {
          const double scale = g[0] * (w.empty() ? 1.0 : w[s]);
          if (scale == 0.0) continue;
          if (ga) (*ga)[y[s]] += scale * (*per_row)[s];
          if (!gz) continue;
          const double alpha = std::exp(log_alpha.value()[y[s]]);
          const double p = std::max(probs->at(s, y[s]), kMinProb);
          const double q = 1.0 - p;
          // d loss / d p_t, multiplied by p_t.
          double dp = std::pow(q, gamma);
          if (gamma != 0.0 && q > 0.0) dp -= gamma * std::pow(q, gamma - 1.0) * p * std::log(p);
          dp *= -alpha * scale;
          double* row = gz->data() + s * C;
          for (std::size_t k = 0; k < C; ++k) {
            row[k] += dp * ((k == y[s] ? 1.0 : 0.0) - probs->at(s, k));
          }
        }
      });
}

Var cross_entropy(Var logits, std::span<const std::size_t> labels,
                  std::span<const double> weights) {
  const Tensor& Z = logits.value();
  check_labels(Z, labels, weights, "cross_entropy");
  const std::size_t S = Z.rows(), C = Z.cols();
  double total = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    const auto row = Z.row(s);
    const double top = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double v : row) sum += std::exp(v - top);
    total += (weights.empty() ? 1.0 : weights[s]) * (top + std::log(sum) - row[labels[s]]);
  }
  std::vector<std::size_t> y(labels.begin(), labels.end());
  std::vector<double> w(weights.begin(), weights.end());
  return logits.tape->push(Tensor::vector({total}), logits.tracked(),
                           [logits, y, w, S, C](const Tensor&, const Tensor& g) {
                             const Tensor p = num::softmax(logits.value());
                             Tensor& gz = logits.tape->grad(logits);
                             for (std::size_t s = 0; s < S; ++s) {
                               const double scale = g[0] * (w.empty() ? 1.0 : w[s]);
                               for (std::size_t k = 0; k < C; ++k) {
                                 gz[s * C + k] +=
                                     scale * (p[s * C + k] - (k == y[s] ? 1.0 : 0.0));
                               }
                             }
                           });
}

}  // namespace lemon
