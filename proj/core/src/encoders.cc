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

#include "lemon/encoders.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "lemon/error.h"
#include "lemon/ops.h"

namespace lemon {
namespace {

using num::Tensor;
using num::Var;

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

void check_spans(std::span<const Span> spans, std::size_t n, const char* op) {
  for (const Span& s : spans) {
    if (s.start > s.end || s.end >= n) {
      throw DimensionError(std::string(op) + ": span [" + std::to_string(s.start) +
                           "," + std::to_string(s.end) + "] outside a sentence of " +
                           std::to_string(n) + " characters");
    }
  }
}

// Longest requested length per start (or per end), keyed by position.
std::map<std::size_t, std::size_t> longest_by(std::span<const Span> spans, bool by_start) {
  std::map<std::size_t, std::size_t> out;
  for (const Span& s : spans) {
    std::size_t& len = out[by_start ? s.start : s.end];
    len = std::max(len, s.length());
  }
  return out;
}

struct LstmCache {
  std::vector<std::size_t> offsets;  // first output row per sequence
  std::vector<std::size_t> lengths;
  std::vector<std::vector<std::size_t>> sequences;
  Tensor gates;  // activated [i f g o] per output row
  Tensor cells;
  Tensor tanh_cells;
  std::size_t max_len = 0;
};

}  // namespace

std::size_t fragment_count(std::size_t n, std::size_t m) {
  if (m >= n) return n * (n + 1) / 2;
  return m * (2 * n - m + 1) / 2;
}

std::vector<Span> enumerate_fragments(std::size_t n, std::size_t m) {
  std::vector<Span> spans;
  spans.reserve(fragment_count(n, m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n && j - i < m; ++j) spans.push_back({i, j});
  }
  return spans;
}

std::size_t LstmParameters::hidden() const { return wh ? wh->value().rows() : 0; }

LstmVars lstm_vars(num::Tape& tape, const LstmParameters& p) {
  return {tape.param(*p.wx), tape.param(*p.wh), tape.param(*p.b)};
}

Var lstm_sequences(Var x, const LstmVars& w,
                   std::span<const std::vector<std::size_t>> sequences) {
  const Tensor& X = x.value();
  const Tensor& Wx = w.wx.value();
  const Tensor& Wh = w.wh.value();
  const Tensor& B = w.b.value();
  const std::size_t h = Wh.rows();
  const std::size_t g4 = 4 * h;
  if (Wh.cols() != g4 || Wx.cols() != g4 || Wx.rows() != X.cols() || B.size() != g4) {
    throw DimensionError("lstm: weights " + num::shape_string(Wx.shape()) + ", " +
                         num::shape_string(Wh.shape()) + ", " +
                         num::shape_string(B.shape()) + " do not fit input " +
                         num::shape_string(X.shape()));
  }

  auto cache = std::make_shared<LstmCache>();
  cache->sequences.assign(sequences.begin(), sequences.end());
  std::size_t rows = 0;
  for (const auto& seq : sequences) {
    for (std::size_t r : seq) {
      if (r >= X.rows()) {
        throw DimensionError("lstm: input row " + std::to_string(r) + " out of " +
                             num::shape_string(X.shape()));
      }
    }
    cache->offsets.push_back(rows);
    cache->lengths.push_back(seq.size());
    cache->max_len = std::max(cache->max_len, seq.size());
    rows += seq.size();
  }

  Tensor P({X.rows(), g4});
  num::gemm(X, false, Wx, false, P, false);
  for (std::size_t r = 0; r < P.rows(); ++r)
    for (std::size_t j = 0; j < g4; ++j) P.at(r, j) += B[j];

  cache->gates = Tensor({rows, g4});
  cache->cells = Tensor({rows, h});
  cache->tanh_cells = Tensor({rows, h});
  Tensor H({rows, h});

  std::vector<std::size_t> active;
  for (std::size_t s = 0; s < cache->max_len; ++s) {
    active.clear();
    for (std::size_t k = 0; k < sequences.size(); ++k)
      if (cache->lengths[k] > s) active.push_back(k);
    Tensor Z({active.size(), g4});
    for (std::size_t a = 0; a < active.size(); ++a) {
      const auto src = P.row(sequences[active[a]][s]);
      std::copy(src.begin(), src.end(), Z.row(a).begin());
    }
    if (s > 0) {
      Tensor Hprev({active.size(), h});
      for (std::size_t a = 0; a < active.size(); ++a) {
        const auto src = H.row(cache->offsets[active[a]] + s - 1);
        std::copy(src.begin(), src.end(), Hprev.row(a).begin());
      }
      num::gemm(Hprev, false, Wh, false, Z, true);
    }
    for (std::size_t a = 0; a < active.size(); ++a) {
      const std::size_t r = cache->offsets[active[a]] + s;
      double* gate = cache->gates.data() + r * g4;
      const double* z = Z.data() + a * g4;
      double* c = cache->cells.data() + r * h;
      double* tc = cache->tanh_cells.data() + r * h;
      double* hr = H.data() + r * h;
      const double* c_prev = s > 0 ? c - h : nullptr;
      for (std::size_t u = 0; u < h; ++u) {
        const double i = sigmoid(z[u]);
        const double f = sigmoid(z[h + u]);
        const double g = std::tanh(z[2 * h + u]);
        const double o = sigmoid(z[3 * h + u]);
        gate[u] = i;
        gate[h + u] = f;
        gate[2 * h + u] = g;
        gate[3 * h + u] = o;
        c[u] = i * g + (c_prev ? f * c_prev[u] : 0.0);
        tc[u] = std::tanh(c[u]);
        hr[u] = o * tc[u];
      }
    }
  }

  const bool tracked = x.tracked() || w.wx.tracked() || w.wh.tracked() || w.b.tracked();
  return x.tape->push(std::move(H), tracked, [x, w, cache, h, g4](const Tensor& H,
                                                                   const Tensor& G) {
    num::Tape& tape = *x.tape;
    const std::size_t rows = H.rows();
    const std::size_t nseq = cache->sequences.size();
    Tensor dZ({rows, g4});
    Tensor dh_carry({nseq, h});
    Tensor dc_carry({nseq, h});
    const Tensor& Wh = w.wh.value();
    std::vector<std::size_t> active;
    for (std::size_t s = cache->max_len; s-- > 0;) {
      active.clear();
      for (std::size_t k = 0; k < nseq; ++k)
        if (cache->lengths[k] > s) active.push_back(k);
      for (std::size_t k : active) {
        const std::size_t r = cache->offsets[k] + s;
        const double* gate = cache->gates.data() + r * g4;
        const double* tc = cache->tanh_cells.data() + r * h;
        const double* c_prev = s > 0 ? cache->cells.data() + (r - 1) * h : nullptr;
        double* dz = dZ.data() + r * g4;
        double* dhc = dh_carry.data() + k * h;
        double* dcc = dc_carry.data() + k * h;
        for (std::size_t u = 0; u < h; ++u) {
          const double i = gate[u], f = gate[h + u], g = gate[2 * h + u],
                       o = gate[3 * h + u];
          const double dh = G[r * h + u] + dhc[u];
          const double dc = dcc[u] + dh * o * (1.0 - tc[u] * tc[u]);
          dz[u] = dc * g * i * (1.0 - i);
          dz[h + u] = (c_prev ? dc * c_prev[u] : 0.0) * f * (1.0 - f);
          dz[2 * h + u] = dc * i * (1.0 - g * g);
          dz[3 * h + u] = dh * tc[u] * o * (1.0 - o);
          dcc[u] = dc * f;
        }
      }
      if (s == 0) break;
      Tensor dZb({active.size(), g4});
      Tensor Hprev({active.size(), h});
      for (std::size_t a = 0; a < active.size(); ++a) {
        const std::size_t r = cache->offsets[active[a]] + s;
        std::copy_n(dZ.data() + r * g4, g4, dZb.data() + a * g4);
        std::copy_n(H.data() + (r - 1) * h, h, Hprev.data() + a * h);
      }
      Tensor dHprev({active.size(), h});
      num::gemm(dZb, false, Wh, true, dHprev, false);
      for (std::size_t a = 0; a < active.size(); ++a)
        std::copy_n(dHprev.data() + a * h, h, dh_carry.data() + active[a] * h);
      if (w.wh.tracked()) num::gemm(Hprev, true, dZb, false, tape.grad(w.wh), true);
    }

    const Tensor& X = x.value();
    Tensor dP({X.rows(), g4});
    for (std::size_t k = 0; k < nseq; ++k) {
      const auto& seq = cache->sequences[k];
      for (std::size_t s = 0; s < seq.size(); ++s) {
        const double* dz = dZ.data() + (cache->offsets[k] + s) * g4;
        double* dp = dP.data() + seq[s] * g4;
        for (std::size_t j = 0; j < g4; ++j) dp[j] += dz[j];
      }
    }
    if (w.wx.tracked()) num::gemm(X, true, dP, false, tape.grad(w.wx), true);
    if (x.tracked()) num::gemm(dP, false, w.wx.value(), true, tape.grad(x), true);
    if (w.b.tracked()) {
      Tensor& gb = tape.grad(w.b);
      for (std::size_t r = 0; r < dP.rows(); ++r)
        for (std::size_t j = 0; j < g4; ++j) gb[j] += dP.at(r, j);
    }
  });
}

CharEncoderKind parse_char_encoder(const std::string& name) {
  if (name == "baseline") return CharEncoderKind::kBaseline;
  if (name == "birnn") return CharEncoderKind::kBiRnn;
  throw ConfigError("unknown character encoder '" + name + "' (baseline|birnn)");
}

FragmentEncoderKind parse_fragment_encoder(const std::string& name) {
  if (name == "bow") return FragmentEncoderKind::kBow;
  if (name == "fofe") return FragmentEncoderKind::kFofe;
  if (name == "birnn") return FragmentEncoderKind::kBiRnn;
  throw ConfigError("unknown fragment encoder '" + name + "' (bow|fofe|birnn)");
}

std::string to_string(CharEncoderKind kind) {
  return kind == CharEncoderKind::kBaseline ? "baseline" : "birnn";
}

std::string to_string(FragmentEncoderKind kind) {
  switch (kind) {
    case FragmentEncoderKind::kBow: return "bow";
    case FragmentEncoderKind::kFofe: return "fofe";
    case FragmentEncoderKind::kBiRnn: return "birnn";
  }
  return "?";
}

Var encode_characters(num::Tape& tape, Var w, CharEncoderKind kind,
                      std::span<const BiLstmParameters> layers) {
  if (kind == CharEncoderKind::kBaseline) return w;
  if (layers.empty()) throw ConfigError("birnn character encoder needs at least one layer");
  const std::size_t n = w.value().rows();
  std::vector<std::vector<std::size_t>> forward(1), backward(1);
  std::vector<std::size_t> reversed(n);
  for (std::size_t i = 0; i < n; ++i) {
    forward[0].push_back(i);
    backward[0].push_back(n - 1 - i);
    reversed[i] = n - 1 - i;
  }
  Var x = w;
  for (const BiLstmParameters& layer : layers) {
    Var f = lstm_sequences(x, lstm_vars(tape, layer.forward), forward);
    Var b = num::select_rows(lstm_sequences(x, lstm_vars(tape, layer.backward), backward),
                             reversed);
    const Var parts[] = {f, b};
    x = num::hconcat(parts);
  }
  return x;
}

Var encode_fragments_bow(Var t, std::span<const Span> spans) {
  const Tensor& T = t.value();
  const std::size_t n = T.rows(), d = T.cols();
  check_spans(spans, n, "bow");
  Tensor prefix({n + 1, d});
  double* p = prefix.data();
  const double* x = T.data();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) p[(i + 1) * d + c] = p[i * d + c] + x[i * d + c];
  Tensor out({spans.size(), d});
  double* o = out.data();
  for (std::size_t s = 0; s < spans.size(); ++s) {
    const double inv = 1.0 / static_cast<double>(spans[s].length());
    const double* hi = p + (spans[s].end + 1) * d;
    const double* lo = p + spans[s].start * d;
    for (std::size_t c = 0; c < d; ++c) o[s * d + c] = (hi[c] - lo[c]) * inv;
  }
  std::vector<Span> index(spans.begin(), spans.end());
  return t.tape->push(std::move(out), t.tracked(),
                      [t, index, n, d](const Tensor&, const Tensor& g) {
                        Tensor diff({n + 1, d});
                        for (std::size_t s = 0; s < index.size(); ++s) {
                          const double inv = 1.0 / static_cast<double>(index[s].length());
                          for (std::size_t c = 0; c < d; ++c) {
                            diff.at(index[s].start, c) += g.at(s, c) * inv;
                            diff.at(index[s].end + 1, c) -= g.at(s, c) * inv;
                          }
                        }
                        Tensor& gt = t.tape->grad(t);
                        std::vector<double> run(d, 0.0);
                        for (std::size_t i = 0; i < n; ++i)
                          for (std::size_t c = 0; c < d; ++c) {
                            run[c] += diff.at(i, c);
                            gt.at(i, c) += run[c];
                          }
                      });
}

Var encode_fragments_fofe(Var t, std::span<const Span> spans, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("FOFE forgetting factor must lie in (0, 1), got " +
                      std::to_string(alpha));
  }
  const Tensor& T = t.value();
  const std::size_t n = T.rows(), d = T.cols();
  check_spans(spans, n, "fofe");
  // One recursion per start; slot (start, len) lives at row base[start] + len - 1.
  const auto longest = longest_by(spans, true);
  std::vector<std::size_t> base(n, 0), reach(n, 0);
  std::size_t slots = 0;
  for (const auto& [start, len] : longest) {
    base[start] = slots;
    reach[start] = len;
    slots += len;
  }
  Tensor z({slots, d});
  for (const auto& [start, len] : longest) {
    double* row = z.data() + base[start] * d;
    std::copy_n(T.data() + start * d, d, row);
    for (std::size_t l = 1; l < len; ++l) {
      double* next = row + d;
      const double* tk = T.data() + (start + l) * d;
      for (std::size_t c = 0; c < d; ++c) next[c] = alpha * row[c] + tk[c];
      row = next;
    }
  }
  Tensor out({spans.size(), d});
  std::vector<std::size_t> slot_of(spans.size());
  for (std::size_t s = 0; s < spans.size(); ++s) {
    slot_of[s] = base[spans[s].start] + spans[s].length() - 1;
    std::copy_n(z.data() + slot_of[s] * d, d, out.data() + s * d);
  }
  return t.tape->push(
      std::move(out), t.tracked(),
      [t, slot_of, base, reach, slots, n, d, alpha](const Tensor&, const Tensor& g) {
        Tensor gz({slots, d});
        for (std::size_t s = 0; s < slot_of.size(); ++s)
          for (std::size_t c = 0; c < d; ++c) gz.at(slot_of[s], c) += g.at(s, c);
        Tensor& gt = t.tape->grad(t);
        std::vector<double> u(d);
        for (std::size_t start = 0; start < n; ++start) {
          if (reach[start] == 0) continue;
          std::fill(u.begin(), u.end(), 0.0);
          for (std::size_t l = reach[start]; l-- > 0;) {
            const double* gs = gz.data() + (base[start] + l) * d;
            double* dst = gt.data() + (start + l) * d;
            for (std::size_t c = 0; c < d; ++c) {
              u[c] = alpha * u[c] + gs[c];
              dst[c] += u[c];
            }
          }
        }
      });
}

Var encode_fragments_birnn(num::Tape& tape, Var t, std::span<const Span> spans,
                           const BiLstmParameters& params) {
  const std::size_t n = t.value().rows();
  check_spans(spans, n, "birnn");
  const auto by_start = longest_by(spans, true);
  const auto by_end = longest_by(spans, false);
  std::vector<std::vector<std::size_t>> forward, backward;
  std::vector<std::size_t> forward_base(n, 0), backward_base(n, 0);
  std::size_t rows = 0;
  for (const auto& [start, len] : by_start) {
    forward_base[start] = rows;
    rows += len;
    auto& seq = forward.emplace_back();
    for (std::size_t l = 0; l < len; ++l) seq.push_back(start + l);
  }
  rows = 0;
  for (const auto& [end, len] : by_end) {
    backward_base[end] = rows;
    rows += len;
    auto& seq = backward.emplace_back();
    for (std::size_t l = 0; l < len; ++l) seq.push_back(end - l);
  }
  std::vector<std::size_t> forward_rows, backward_rows;
  forward_rows.reserve(spans.size());
  backward_rows.reserve(spans.size());
  for (const Span& s : spans) {
    forward_rows.push_back(forward_base[s.start] + s.length() - 1);
    backward_rows.push_back(backward_base[s.end] + s.length() - 1);
  }
  Var f = lstm_sequences(t, lstm_vars(tape, params.forward), forward);
  Var b = lstm_sequences(t, lstm_vars(tape, params.backward), backward);
  const Var parts[] = {num::select_rows(f, forward_rows), num::select_rows(b, backward_rows)};
  return num::hconcat(parts);
}

}  // namespace lemon
