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

#include <gtest/gtest.h>

#include "encoder_oracles.h"
#include "grad_check.h"
#include "lemon/encoders.h"
#include "lemon/error.h"
#include "lemon/ops.h"
#include "lemon/rng.h"

namespace lemon {
namespace {

using num::Parameter;
using num::Tensor;

Tensor random_matrix(Rng& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  Tensor t({r, c});
  for (double& v : t.values()) v = rng.uniform(-scale, scale);
  return t;
}

struct Lstm {
  Parameter wx, wh, b;
  Lstm(Rng& rng, std::size_t in, std::size_t h, double scale = 0.5)
      : wx("wx", random_matrix(rng, in, 4 * h, scale)),
        wh("wh", random_matrix(rng, h, 4 * h, scale)),
        b("b", Tensor::vector(std::vector<double>(4 * h))) {
    for (double& v : b.value().values()) v = rng.uniform(-scale, scale);
  }
  LstmParameters params() { return {&wx, &wh, &b}; }
};

void expect_row_near(const Tensor& t, std::size_t r, const std::vector<double>& want,
                     double tol) {
  ASSERT_EQ(t.cols(), want.size());
  for (std::size_t c = 0; c < want.size(); ++c) EXPECT_NEAR(t.at(r, c), want[c], tol);
}

TEST(EnumerateFragmentsTest, Examples) {
  EXPECT_EQ(enumerate_fragments(10, 5).size(), 40u);
  EXPECT_EQ(enumerate_fragments(3, 1).size(), 3u);
  EXPECT_EQ(enumerate_fragments(2, 5).size(), 3u);
  EXPECT_EQ(enumerate_fragments(2, 5),
            (std::vector<Span>{{0, 0}, {0, 1}, {1, 1}}));
}

TEST(EnumerateFragmentsTest, CountLawIsExhaustive) {
  for (std::size_t n = 1; n <= 50; ++n) {
    for (std::size_t m = 1; m <= 50; ++m) {
      const auto spans = enumerate_fragments(n, m);
      const std::size_t expected = m <= n ? m * (2 * n - m + 1) / 2 : n * (n + 1) / 2;
      ASSERT_EQ(spans.size(), expected) << n << "," << m;
      ASSERT_EQ(fragment_count(n, m), expected);
      for (const Span& s : spans) ASSERT_LE(s.length(), m);
    }
  }
}

TEST(CharEncoderTest, BaselineIsIdentity) {
  Rng rng(1);
  num::Tape tape;
  Tensor w = random_matrix(rng, 4, 6);
  num::Var t = encode_characters(tape, tape.constant(w), CharEncoderKind::kBaseline, {});
  EXPECT_EQ(t.value(), w);
}

TEST(CharEncoderTest, SingleCharacterSentence) {
  Rng rng(2);
  Lstm f(rng, 3, 2), b(rng, 3, 2);
  BiLstmParameters layer{f.params(), b.params()};
  num::Tape tape;
  Tensor w = random_matrix(rng, 1, 3);
  num::Var t = encode_characters(tape, tape.constant(w), CharEncoderKind::kBiRnn,
                                 std::span(&layer, 1));
  ASSERT_EQ(t.value().rows(), 1u);
  ASSERT_EQ(t.value().cols(), 4u);
  const auto hf = testing::direct_lstm(w, {0}, f.wx.value(), f.wh.value(), f.b.value());
  const auto hb = testing::direct_lstm(w, {0}, b.wx.value(), b.wh.value(), b.b.value());
  expect_row_near(t.value(), 0, {hf[0], hf[1], hb[0], hb[1]}, 1e-12);
}

// Swap the two halves of a layer's input rows so a reversed run sees the
// original features in the same order.
Tensor swap_input_halves(const Tensor& wx) {
  const std::size_t half = wx.rows() / 2;
  Tensor out(wx.shape());
  for (std::size_t r = 0; r < wx.rows(); ++r) {
    const std::size_t src = r < half ? r + half : r - half;
    std::copy_n(wx.data() + src * wx.cols(), wx.cols(), out.data() + r * wx.cols());
  }
  return out;
}

TEST(CharEncoderTest, ReversalSymmetry) {
  Rng rng(3);
  const std::size_t n = 6, in = 5, h = 3;
  Lstm f1(rng, in, h), b1(rng, in, h), f2(rng, 2 * h, h), b2(rng, 2 * h, h);
  std::vector<BiLstmParameters> layers = {{f1.params(), b1.params()},
                                          {f2.params(), b2.params()}};
  Parameter f2_swapped("f2wx", swap_input_halves(f2.wx.value()));
  Parameter b2_swapped("b2wx", swap_input_halves(b2.wx.value()));
  std::vector<BiLstmParameters> mirrored = {
      {b1.params(), f1.params()},
      {{&b2_swapped, &b2.wh, &b2.b}, {&f2_swapped, &f2.wh, &f2.b}}};

  Tensor w = random_matrix(rng, n, in);
  Tensor w_rev({n, in});
  for (std::size_t i = 0; i < n; ++i)
    std::copy_n(w.data() + (n - 1 - i) * in, in, w_rev.data() + i * in);

  num::Tape tape;
  const Tensor t = encode_characters(tape, tape.constant(w), CharEncoderKind::kBiRnn, layers).value();
  const Tensor r =
      encode_characters(tape, tape.constant(w_rev), CharEncoderKind::kBiRnn, mirrored).value();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < h; ++c) {
      EXPECT_NEAR(r.at(n - 1 - i, c), t.at(i, h + c), 1e-12);
      EXPECT_NEAR(r.at(n - 1 - i, h + c), t.at(i, c), 1e-12);
    }
  }
}

TEST(BowEncoderTest, SingleCharacterAndConstantSpans) {
  Tensor t = Tensor::matrix({{1, 2}, {1, 2}, {1, 2}});
  num::Tape tape;
  const auto spans = enumerate_fragments(3, 3);
  const Tensor f = encode_fragments_bow(tape.constant(t), spans).value();
  for (std::size_t s = 0; s < spans.size(); ++s) expect_row_near(f, s, {1, 2}, 1e-15);
}

TEST(BowEncoderTest, MatchesDirectMeanOverSeeds) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const std::size_t n = 1 + rng.below(20), m = 1 + rng.below(10), d = 1 + rng.below(6);
    Tensor t = random_matrix(rng, n, d, 3.0);
    const auto spans = enumerate_fragments(n, m);
    num::Tape tape(false);
    const Tensor f = encode_fragments_bow(tape.constant(t), spans).value();
    for (std::size_t s = 0; s < spans.size(); ++s)
      expect_row_near(f, s, testing::direct_mean(t, spans[s].start, spans[s].end), 1e-10);
  }
}

TEST(FofeEncoderTest, UnrolledTwoStep) {
  Tensor t = Tensor::matrix({{1, 4}, {3, -2}});
  num::Tape tape;
  const Tensor f = encode_fragments_fofe(tape.constant(t), enumerate_fragments(2, 2), 0.5).value();
  expect_row_near(f, 0, {1, 4}, 0);
  expect_row_near(f, 1, {0.5 * 1 + 3, 0.5 * 4 - 2}, 0);
  expect_row_near(f, 2, {3, -2}, 0);
}

TEST(FofeEncoderTest, AlphaOutsideOpenIntervalIsConfigError) {
  num::Tape tape;
  num::Var t = tape.constant(Tensor::matrix({{1}}));
  const auto spans = enumerate_fragments(1, 1);
  EXPECT_THROW(encode_fragments_fofe(t, spans, 0.0), ConfigError);
  EXPECT_THROW(encode_fragments_fofe(t, spans, 1.0), ConfigError);
  EXPECT_THROW(encode_fragments_fofe(t, spans, -0.3), ConfigError);
}

TEST(FofeEncoderTest, MatchesClosedFormOverSeeds) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const std::size_t n = 1 + rng.below(20), m = 1 + rng.below(10), d = 1 + rng.below(6);
    const double alpha = rng.uniform(0.05, 0.95);
    Tensor t = random_matrix(rng, n, d, 3.0);
    const auto spans = enumerate_fragments(n, m);
    num::Tape tape(false);
    const Tensor f = encode_fragments_fofe(tape.constant(t), spans, alpha).value();
    for (std::size_t s = 0; s < spans.size(); ++s)
      expect_row_near(f, s, testing::direct_fofe(t, spans[s].start, spans[s].end, alpha), 1e-10);
  }
}

TEST(BirnnFragmentTest, ZeroWeightsGiveZeroEncodings) {
  Rng rng(4);
  Lstm f(rng, 3, 2, 0.0), b(rng, 3, 2, 0.0);
  num::Tape tape;
  Tensor t = random_matrix(rng, 5, 3);
  const Tensor out = encode_fragments_birnn(tape, tape.constant(t), enumerate_fragments(5, 3),
                                            {f.params(), b.params()})
                         .value();
  for (double v : out.values()) EXPECT_EQ(v, 0.0);
}

TEST(BirnnFragmentTest, SingleCharacterSpanUsesOneStep) {
  Rng rng(5);
  Lstm f(rng, 3, 2), b(rng, 3, 2);
  num::Tape tape;
  Tensor t = random_matrix(rng, 4, 3);
  std::vector<Span> spans = {{2, 2}};
  const Tensor out =
      encode_fragments_birnn(tape, tape.constant(t), spans, {f.params(), b.params()}).value();
  auto hf = testing::direct_lstm(t, {2}, f.wx.value(), f.wh.value(), f.b.value());
  const auto hb = testing::direct_lstm(t, {2}, b.wx.value(), b.wh.value(), b.b.value());
  hf.insert(hf.end(), hb.begin(), hb.end());
  expect_row_near(out, 0, hf, 1e-14);
}

TEST(BirnnFragmentTest, SharedStatesMatchPerSpanRunsOverSeeds) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const std::size_t n = 1 + rng.below(12), m = 1 + rng.below(6);
    const std::size_t d = 1 + rng.below(4), h = 1 + rng.below(4);
    Lstm f(rng, d, h, 0.8), b(rng, d, h, 0.8);
    Tensor t = random_matrix(rng, n, d, 2.0);
    const auto spans = enumerate_fragments(n, m);
    num::Tape tape(false);
    const Tensor out =
        encode_fragments_birnn(tape, tape.constant(t), spans, {f.params(), b.params()}).value();
    for (std::size_t s = 0; s < spans.size(); ++s) {
      std::vector<std::size_t> fwd, bwd;
      for (std::size_t k = spans[s].start; k <= spans[s].end; ++k) fwd.push_back(k);
      bwd.assign(fwd.rbegin(), fwd.rend());
      auto want = testing::direct_lstm(t, fwd, f.wx.value(), f.wh.value(), f.b.value());
      const auto hb = testing::direct_lstm(t, bwd, b.wx.value(), b.wh.value(), b.b.value());
      want.insert(want.end(), hb.begin(), hb.end());
      expect_row_near(out, s, want, 1e-8);
    }
  }
}

TEST(EncoderGradientTest, BowFofeAndBirnnFragments) {
  Rng rng(9);
  Parameter t("t", random_matrix(rng, 6, 3));
  Lstm f(rng, 3, 2), b(rng, 3, 2);
  const auto spans = enumerate_fragments(6, 4);
  auto loss = [&](num::Tape& tape) {
    num::Var tv = tape.param(t);
    const num::Var parts[] = {encode_fragments_bow(tv, spans),
                              encode_fragments_fofe(tv, spans, 0.6),
                              encode_fragments_birnn(tape, tv, spans, {f.params(), b.params()})};
    num::Var all = num::hconcat(parts);
    Tensor w({all.value().rows(), all.value().cols()});
    Rng local(1);
    for (double& v : w.values()) v = local.uniform(-1, 1);
    return num::sum(num::mul(num::tanh(all), tape.constant(w)));
  };
  auto report = testing::check_gradients({&t, &f.wx, &f.wh, &f.b, &b.wx, &b.wh, &b.b}, loss);
  EXPECT_LT(report.max_rel_error, 1e-5) << report.worst;
}

TEST(EncoderGradientTest, TwoLayerCharacterEncoder) {
  Rng rng(10);
  Parameter w("w", random_matrix(rng, 5, 3));
  Lstm f1(rng, 3, 2), b1(rng, 3, 2), f2(rng, 4, 2), b2(rng, 4, 2);
  std::vector<BiLstmParameters> layers = {{f1.params(), b1.params()},
                                          {f2.params(), b2.params()}};
  auto loss = [&](num::Tape& tape) {
    num::Var t = encode_characters(tape, tape.param(w), CharEncoderKind::kBiRnn, layers);
    Tensor c({t.value().rows(), t.value().cols()});
    Rng local(2);
    for (double& v : c.values()) v = local.uniform(-1, 1);
    return num::sum(num::mul(t, tape.constant(c)));
  };
  auto report = testing::check_gradients(
      {&w, &f1.wx, &f1.wh, &f1.b, &b1.wx, &b1.wh, &b1.b, &f2.wx, &f2.wh, &f2.b}, loss);
  EXPECT_LT(report.max_rel_error, 1e-5) << report.worst;
}

TEST(EncoderNamesTest, ParseAndPrint) {
  EXPECT_EQ(parse_char_encoder("birnn"), CharEncoderKind::kBiRnn);
  EXPECT_EQ(to_string(parse_fragment_encoder("fofe")), "fofe");
  EXPECT_THROW(parse_fragment_encoder("cnn"), ConfigError);
}

}  // namespace
}  // namespace lemon
