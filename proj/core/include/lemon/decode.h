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

#ifndef LEMON_DECODE_H_
#define LEMON_DECODE_H_

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lemon/corpus.h"
#include "lemon/encoders.h"
#include "lemon/tensor.h"

namespace lemon {

struct ScoredSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t type = 0;
  double prob = 0.0;

  bool contains(const ScoredSpan& o) const { return start <= o.start && o.end <= end; }
  bool overlaps(const ScoredSpan& o) const { return start <= o.end && o.start <= end; }
  auto operator<=>(const ScoredSpan&) const = default;
};

struct DecodeConfig {
  double threshold = 0.25;
  bool nested = false;
};

// Keeps spans whose most probable class is not NONE (class 0) and whose
// probability exceeds the threshold. probs holds one distribution per span.
// Throws ConfigError unless 0 <= threshold <= 1.
std::vector<ScoredSpan> filter_threshold(std::span<const Span> spans,
                                         const num::Tensor& probs, double threshold);

// Flat mode first drops every span strictly inside another candidate, then
// walks the rest by descending probability (earlier start, then longer span on
// ties) and drops any span overlapping one already kept. Nested mode skips the
// first step and only drops partial overlaps. Output is sorted by position.
std::vector<ScoredSpan> resolve(std::vector<ScoredSpan> spans, bool nested);

std::vector<ScoredSpan> decode(std::span<const Span> spans, const num::Tensor& probs,
                               const DecodeConfig& config);

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  // Percentages; an empty denominator gives 0.
  double precision() const;
  double recall() const;
  double f1() const;
  Counts& operator+=(const Counts& o);
};

struct EvaluationReport {
  Counts micro;
  std::map<std::size_t, Counts> per_type;
};

// Entity-level exact match on (start, end, type). Throws UsageError when the
// two lists differ in length.
EvaluationReport evaluate(std::span<const std::vector<ScoredSpan>> predicted,
                          std::span<const std::vector<GoldSpan>> gold);

// "P R F1" block followed by one line per type.
std::string format_report(const EvaluationReport& report, const SymbolTable& types);

}  // namespace lemon

#endif  // LEMON_DECODE_H_
