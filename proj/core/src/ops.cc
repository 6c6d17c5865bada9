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

#include "lemon/ops.h"

#include <algorithm>
#include <cmath>

#include "lemon/error.h"

namespace lemon::num {
namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         shape_string(a.shape()) + " vs " +
                         shape_string(b.shape()));
  }
}

Tape& tape_of(Var a, Var b) {
  if (a.tape != b.tape) throw UsageError("vars belong to different tapes");
  return *a.tape;
}

Shape matrix_shape(std::size_t rows, std::size_t cols) { return {rows, cols}; }

}  // namespace

void gemm(const Tensor& a, bool trans_a, const Tensor& b, bool trans_b,
          Tensor& c, bool accumulate) {
  const std::size_t m = trans_a ? a.cols() : a.rows();
  const std::size_t k = trans_a ? a.rows() : a.cols();
  const std::size_t kb = trans_b ? b.cols() : b.rows();
  const std::size_t n = trans_b ? b.rows() : b.cols();
  if (k != kb || c.rows() != m || c.cols() != n) {
    throw DimensionError("gemm: incompatible shapes " +
                         shape_string(a.shape()) + (trans_a ? "^T" : "") +
                         " x " + shape_string(b.shape()) +
                         (trans_b ? "^T" : "") + " -> " +
                         shape_string(c.shape()));
  }
  if (!accumulate) c.fill(0.0);
  const double* A = a.data();
  const double* B = b.data();
  double* C = c.data();
  const std::size_t lda = a.cols();
  const std::size_t ldb = b.cols();
  if (!trans_a && !trans_b) {
    for (std::size_t i = 0; i < m; ++i) {
      double* ci = C + i * n;
      for (std::size_t p = 0; p < k; ++p) {
        const double av = A[i * lda + p];
        if (av == 0.0) continue;
        const double* bp = B + p * ldb;
        for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
      }
    }
  } else if (trans_a && !trans_b) {
    for (std::size_t p = 0; p < k; ++p) {
      const double* ap = A + p * lda;
      const double* bp = B + p * ldb;
      for (std::size_t i = 0; i < m; ++i) {
        const double av = ap[i];
        if (av == 0.0) continue;
        double* ci = C + i * n;
        for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
      }
    }
  } else if (!trans_a && trans_b) {
    for (std::size_t i = 0; i < m; ++i) {
      const double* ai = A + i * lda;
      for (std::size_t j = 0; j < n; ++j) {
        const double* bj = B + j * ldb;
        double acc = 0.0;
        for (std::size_t p = 0; p < k; ++p) acc += ai[p] * bj[p];
        C[i * n + j] += acc;
      }
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t p = 0; p < k; ++p) {
          acc += A[p * lda + i] * B[j * ldb + p];
        }
        C[i * n + j] += acc;
      }
    }
  }
}

Var matmul(Var a, Var b) {
  Tape& tape = tape_of(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.cols() != bv.rows() || bv.rank() > 2 || av.rank() > 2) {
    throw DimensionError("matmul: inner dimensions disagree for " +
                         shape_string(av.shape()) + " and " +
                         shape_string(bv.shape()));
  }
  Tensor out(matrix_shape(av.rows(), bv.cols()));
  gemm(av, false, bv, false, out, false);
  return tape.push(std::move(out), a.tracked() || b.tracked(),
                   [a, b](const Tensor&, const Tensor& g) {
                     Tape& t = *a.tape;
                     if (a.tracked()) gemm(g, false, b.value(), true, t.grad(a), true);
                     if (b.tracked()) gemm(a.value(), true, g, false, t.grad(b), true);
                   });
}

Var transpose(Var a) {
  const Tensor& av = a.value();
  const std::size_t r = av.rows(), c = av.cols();
  Tensor out(matrix_shape(c, r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out.at(j, i) = av.at(i, j);
  return a.tape->push(std::move(out), a.tracked(), [a, r, c](const Tensor&, const Tensor& g) {
    Tensor& ga = a.tape->grad(a);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) ga[i * c + j] += g.at(j, i);
  });
}

Var add(Var a, Var b) {
  Tape& tape = tape_of(a, b);
  require_same_shape(a.value(), b.value(), "add");
  Tensor out = a.value();
  out += b.value();
  return tape.push(std::move(out), a.tracked() || b.tracked(),
                   [a, b](const Tensor&, const Tensor& g) {
                     if (a.tracked()) a.tape->grad(a) += g;
                     if (b.tracked()) b.tape->grad(b) += g;
                   });
}

Var sub(Var a, Var b) {
  Tape& tape = tape_of(a, b);
  require_same_shape(a.value(), b.value(), "sub");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  return tape.push(std::move(out), a.tracked() || b.tracked(),
                   [a, b](const Tensor&, const Tensor& g) {
                     if (a.tracked()) a.tape->grad(a) += g;
                     if (b.tracked()) {
                       Tensor& gb = b.tape->grad(b);
                       for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
                     }
                   });
}

Var mul(Var a, Var b) {
  Tape& tape = tape_of(a, b);
  require_same_shape(a.value(), b.value(), "mul");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  return tape.push(std::move(out), a.tracked() || b.tracked(),
                   [a, b](const Tensor&, const Tensor& g) {
                     Tape& t = *a.tape;
                     if (a.tracked()) {
                       Tensor& ga = t.grad(a);
                       const Tensor& bv = b.value();
                       for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
                     }
                     if (b.tracked()) {
                       Tensor& gb = t.grad(b);
                       const Tensor& av = a.value();
                       for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
                     }
                   });
}

Var scale(Var a, double s) {
  Tensor out = a.value();
  for (double& v : out.values()) v *= s;
  return a.tape->push(std::move(out), a.tracked(), [a, s](const Tensor&, const Tensor& g) {
    Tensor& ga = a.tape->grad(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += s * g[i];
  });
}

Var add_bias(Var a, Var bias) {
  Tape& tape = tape_of(a, bias);
  const Tensor& bv = bias.value();
  Tensor out = a.value();
  const std::size_t r = out.rows(), c = out.cols();
  if (bv.size() != c) {
    throw DimensionError("add_bias: bias " + shape_string(bv.shape()) +
                         " does not match " + shape_string(out.shape()));
  }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] += bv[j];
  return tape.push(std::move(out), a.tracked() || bias.tracked(),
                   [a, bias, r, c](const Tensor&, const Tensor& g) {
                     if (a.tracked()) a.tape->grad(a) += g;
                     if (bias.tracked()) {
                       Tensor& gb = bias.tape->grad(bias);
                       for (std::size_t i = 0; i < r; ++i)
                         for (std::size_t j = 0; j < c; ++j) gb[j] += g[i * c + j];
                     }
                   });
}

Var tanh(Var x) {
  Tensor out = x.value();
  for (double& v : out.values()) v = std::tanh(v);
  return x.tape->push(std::move(out), x.tracked(),
                      [x](const Tensor& y, const Tensor& g) {
                        Tensor& gx = x.tape->grad(x);
                        for (std::size_t i = 0; i < g.size(); ++i)
                          gx[i] += g[i] * (1.0 - y[i] * y[i]);
                      });
}

Var sigmoid(Var x) {
  Tensor out = x.value();
  for (double& v : out.values()) v = 1.0 / (1.0 + std::exp(-v));
  return x.tape->push(std::move(out), x.tracked(),
                      [x](const Tensor& y, const Tensor& g) {
                        Tensor& gx = x.tape->grad(x);
                        for (std::size_t i = 0; i < g.size(); ++i)
                          gx[i] += g[i] * y[i] * (1.0 - y[i]);
                      });
}

Tensor softmax(const Tensor& x) {
  if (x.empty()) throw DomainError("softmax of an empty tensor");
  Tensor out = x;
  const std::size_t r = x.rows();
  for (std::size_t i = 0; i < r; ++i) {
    auto row = out.row(i);
    const double mx = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (double& v : row) {
      v = std::exp(v - mx);
      total += v;
    }
    for (double& v : row) v /= total;
  }
  return out;
}

Var softmax(Var x) {
  return x.tape->push(softmax(x.value()), x.tracked(),
                      [x](const Tensor& y, const Tensor& g) {
                        Tensor& gx = x.tape->grad(x);
                        const std::size_t r = y.rows(), c = y.cols();
                        for (std::size_t i = 0; i < r; ++i) {
                          double dot = 0.0;
                          for (std::size_t j = 0; j < c; ++j)
                            dot += g[i * c + j] * y[i * c + j];
                          for (std::size_t j = 0; j < c; ++j)
                            gx[i * c + j] += y[i * c + j] * (g[i * c + j] - dot);
                        }
                      });
}

Var concat(std::span<const Var> parts) {
  if (parts.empty()) throw DimensionError("concat of zero parts");
  std::vector<double> values;
  bool tracked = false;
  for (Var p : parts) {
    const auto v = p.value().values();
    values.insert(values.end(), v.begin(), v.end());
    tracked = tracked || p.tracked();
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return parts.front().tape->push(
      Tensor::vector(std::move(values)), tracked,
      [inputs](const Tensor&, const Tensor& g) {
        std::size_t offset = 0;
        for (Var p : inputs) {
          const std::size_t n = p.value().size();
          if (p.tracked()) {
            Tensor& gp = p.tape->grad(p);
            for (std::size_t i = 0; i < n; ++i) gp[i] += g[offset + i];
          }
          offset += n;
        }
      });
}

Var hconcat(std::span<const Var> parts) {
  if (parts.empty()) throw DimensionError("hconcat of zero parts");
  const std::size_t rows = parts.front().value().rows();
  std::size_t cols = 0;
  bool tracked = false;
  for (Var p : parts) {
    if (p.value().rows() != rows) {
      throw DimensionError("hconcat: row count mismatch " +
                           shape_string(parts.front().value().shape()) +
                           " vs " + shape_string(p.value().shape()));
    }
    cols += p.value().cols();
    tracked = tracked || p.tracked();
  }
  Tensor out(matrix_shape(rows, cols));
  std::size_t offset = 0;
  for (Var p : parts) {
    const Tensor& v = p.value();
    const std::size_t pc = v.cols();
    for (std::size_t i = 0; i < rows; ++i)
      std::copy_n(v.data() + i * pc, pc, out.data() + i * cols + offset);
    offset += pc;
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return parts.front().tape->push(
      std::move(out), tracked,
      [inputs, rows, cols](const Tensor&, const Tensor& g) {
        std::size_t offset = 0;
        for (Var p : inputs) {
          const std::size_t pc = p.value().cols();
          if (p.tracked()) {
            Tensor& gp = p.tape->grad(p);
            for (std::size_t i = 0; i < rows; ++i)
              for (std::size_t j = 0; j < pc; ++j)
                gp[i * pc + j] += g[i * cols + offset + j];
          }
          offset += pc;
        }
      });
}

Var vstack(std::span<const Var> parts) {
  if (parts.empty()) throw DimensionError("vstack of zero parts");
  const std::size_t cols = parts.front().value().cols();
  std::size_t rows = 0;
  bool tracked = false;
  std::vector<double> values;
  for (Var p : parts) {
    if (p.value().cols() != cols) {
      throw DimensionError("vstack: column count mismatch " +
                           shape_string(parts.front().value().shape()) +
                           " vs " + shape_string(p.value().shape()));
    }
    rows += p.value().rows();
    const auto v = p.value().values();
    values.insert(values.end(), v.begin(), v.end());
    tracked = tracked || p.tracked();
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return parts.front().tape->push(
      Tensor::matrix(rows, cols, std::move(values)), tracked,
      [inputs](const Tensor&, const Tensor& g) {
        std::size_t offset = 0;
        for (Var p : inputs) {
          const std::size_t n = p.value().size();
          if (p.tracked()) {
            Tensor& gp = p.tape->grad(p);
            for (std::size_t i = 0; i < n; ++i) gp[i] += g[offset + i];
          }
          offset += n;
        }
      });
}

Var slice_cols(Var a, std::size_t begin, std::size_t end) {
  const Tensor& av = a.value();
  const std::size_t rows = av.rows(), cols = av.cols();
  if (begin > end || end > cols) {
    throw DimensionError("slice_cols [" + std::to_string(begin) + "," +
                         std::to_string(end) + ") out of " +
                         shape_string(av.shape()));
  }
  const std::size_t width = end - begin;
  Tensor out(matrix_shape(rows, width));
  for (std::size_t i = 0; i < rows; ++i)
    std::copy_n(av.data() + i * cols + begin, width, out.data() + i * width);
  return a.tape->push(std::move(out), a.tracked(),
                      [a, rows, cols, begin, width](const Tensor&, const Tensor& g) {
                        Tensor& ga = a.tape->grad(a);
                        for (std::size_t i = 0; i < rows; ++i)
                          for (std::size_t j = 0; j < width; ++j)
                            ga[i * cols + begin + j] += g[i * width + j];
                      });
}

Var select_rows(Var a, std::span<const std::size_t> rows) {
  const Tensor& av = a.value();
  const std::size_t cols = av.cols();
  Tensor out(matrix_shape(rows.size(), cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= av.rows()) {
      throw DimensionError("select_rows: row " + std::to_string(rows[i]) +
                           " out of " + shape_string(av.shape()));
    }
    std::copy_n(av.data() + rows[i] * cols, cols, out.data() + i * cols);
  }
  std::vector<std::size_t> index(rows.begin(), rows.end());
  return a.tape->push(std::move(out), a.tracked(),
                      [a, index, cols](const Tensor&, const Tensor& g) {
                        Tensor& ga = a.tape->grad(a);
                        for (std::size_t i = 0; i < index.size(); ++i)
                          for (std::size_t j = 0; j < cols; ++j)
                            ga[index[i] * cols + j] += g[i * cols + j];
                      });
}

Var gather_rows(Tape& tape, Parameter& table,
                std::span<const std::size_t> rows) {
  const Tensor& tv = table.value();
  const std::size_t cols = tv.cols();
  Tensor out(matrix_shape(rows.size(), cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= tv.rows()) {
      throw DimensionError("gather_rows: row " + std::to_string(rows[i]) +
                           " out of table '" + table.name() + "' " +
                           shape_string(tv.shape()));
    }
    std::copy_n(tv.data() + rows[i] * cols, cols, out.data() + i * cols);
  }
  const bool tracked = tape.recording() && !table.frozen();
  std::vector<std::size_t> index(rows.begin(), rows.end());
  Parameter* p = &table;
  return tape.push(std::move(out), tracked,
                   [p, index, cols](const Tensor&, const Tensor& g) {
                     Tensor& gt = p->grad();
                     for (std::size_t i = 0; i < index.size(); ++i) {
                       p->touch_row(index[i]);
                       double* dst = gt.data() + index[i] * cols;
                       for (std::size_t j = 0; j < cols; ++j) dst[j] += g[i * cols + j];
                     }
                   });
}

Var dropout(Var x, double rate, bool training, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout rate must lie in [0, 1), got " +
                      std::to_string(rate));
  }
  if (!training || rate == 0.0) return x;
  const Tensor& xv = x.value();
  Tensor mask = Tensor::zeros_like(xv);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = rng.uniform() < rate ? 0.0 : keep_scale;
  }
  Tensor out = xv;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  return x.tape->push(std::move(out), x.tracked(),
                      [x, mask = std::move(mask)](const Tensor&, const Tensor& g) {
                        Tensor& gx = x.tape->grad(x);
                        for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * mask[i];
                      });
}

Var sum(Var x) {
  double total = 0.0;
  for (double v : x.value().values()) total += v;
  return x.tape->push(Tensor::vector({total}), x.tracked(),
                      [x](const Tensor&, const Tensor& g) {
                        Tensor& gx = x.tape->grad(x);
                        for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g[0];
                      });
}

}  // namespace lemon::num
