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

#ifndef LEMON_ENCODERS_H_
#define LEMON_ENCODERS_H_

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lemon/tape.h"

namespace lemon {

// Inclusive character span [start, end].
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t length() const { return end - start + 1; }
  auto operator<=>(const Span&) const = default;
};

// Closed form for the number of spans of length at most m in a sentence of
// length n.
std::size_t fragment_count(std::size_t n, std::size_t m);

// All spans of length <= m, ordered by start then end.
std::vector<Span> enumerate_fragments(std::size_t n, std::size_t m);

// LSTM weights with gate blocks laid out [input, forget, cell, output].
// wx is [in x 4h], wh is [h x 4h], b is [4h].
struct LstmParameters {
  num::Parameter* wx = nullptr;
  num::Parameter* wh = nullptr;
  num::Parameter* b = nullptr;
  std::size_t hidden() const;
};

struct LstmVars {
  num::Var wx, wh, b;
};

LstmVars lstm_vars(num::Tape& tape, const LstmParameters& p);

// Runs one LSTM from a zero state over each sequence of row indices into x.
// The result stacks every hidden state, sequence after sequence and step
// after step. Sequences sharing a step are advanced together.
num::Var lstm_sequences(num::Var x, const LstmVars& w,
                        std::span<const std::vector<std::size_t>> sequences);

struct BiLstmParameters {
  LstmParameters forward;
  LstmParameters backward;
};

enum class CharEncoderKind { kBaseline, kBiRnn };
enum class FragmentEncoderKind { kBow, kFofe, kBiRnn };

CharEncoderKind parse_char_encoder(const std::string& name);
FragmentEncoderKind parse_fragment_encoder(const std::string& name);
std::string to_string(CharEncoderKind kind);
std::string to_string(FragmentEncoderKind kind);

// Baseline returns w unchanged. BiRnn runs two stacked bidirectional layers
// and returns forward ++ backward states of the top layer per character.
num::Var encode_characters(num::Tape& tape, num::Var w, CharEncoderKind kind,
                           std::span<const BiLstmParameters> layers);

// Mean of t[start..end] per span, from running prefix sums.
num::Var encode_fragments_bow(num::Var t, std::span<const Span> spans);

// z = t[start]; z = alpha * z + t[k] for k = start+1..end. Spans sharing a
// start reuse the same recursion. Throws ConfigError unless 0 < alpha < 1.
num::Var encode_fragments_fofe(num::Var t, std::span<const Span> spans,
                               double alpha);

// Final forward state over t[start..end] ++ final backward state over
// t[end..start]. Forward runs are shared by spans with a common start and
// backward runs by spans with a common end.
num::Var encode_fragments_birnn(num::Tape& tape, num::Var t,
                                std::span<const Span> spans,
                                const BiLstmParameters& params);

}  // namespace lemon

#endif  // LEMON_ENCODERS_H_
