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

#include "lemon/decode.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <tuple>

#include "lemon/error.h"

namespace lemon {

std::vector<ScoredSpan> filter_threshold(std::span<const Span> spans,
                                         const num::Tensor& probs, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ConfigError("decode threshold must lie in [0, 1], got " + std::to_string(threshold));
  }
  if (probs.rows() != spans.size()) {
    throw DimensionError("filter_threshold: " + std::to_string(spans.size()) +
                         " spans but probabilities " + num::shape_string(probs.shape()));
  }
  std::vector<ScoredSpan> out;
  for (std::size_t s = 0; s < spans.size(); ++s) {
    const auto row = probs.row(s);
    const std::size_t best = std::max_element(row.begin(), row.end()) - row.begin();
    if (best != 0 && row[best] > threshold) {
      out.push_back({spans[s].start, spans[s].end, best, row[best]});
    }
  }
  return out;
}

std::vector<ScoredSpan> resolve(std::vector<ScoredSpan> spans, bool nested) {
  if (!nested) {
    std::vector<ScoredSpan> outer;
    for (const ScoredSpan& s : spans) {
      const bool inside = std::any_of(spans.begin(), spans.end(), [&](const ScoredSpan& o) {
        return o.contains(s) && (o.start != s.start || o.end != s.end);
      });
      if (!inside) outer.push_back(s);
    }
    spans = std::move(outer);
  }
  std::sort(spans.begin(), spans.end(), [](const ScoredSpan& a, const ScoredSpan& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end > b.end;
    return a.type < b.type;
  });
  std::vector<ScoredSpan> kept;
  for (const ScoredSpan& s : spans) {
    const bool clash = std::any_of(kept.begin(), kept.end(), [&](const ScoredSpan& k) {
      if (!k.overlaps(s)) return false;
      return !nested || !(k.contains(s) || s.contains(k));
    });
    if (!clash) kept.push_back(s);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::vector<ScoredSpan> decode(std::span<const Span> spans, const num::Tensor& probs,
                               const DecodeConfig& config) {
  return resolve(filter_threshold(spans, probs, config.threshold), config.nested);
}

namespace {
double percent(std::size_t num, std::size_t den) {
  return den ? 100.0 * static_cast<double>(num) / static_cast<double>(den) : 0.0;
}
}  // namespace

double Counts::precision() const { return percent(tp, tp + fp); }
double Counts::recall() const { return percent(tp, tp + fn); }
double Counts::f1() const {
  const double p = precision(), r = recall();
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

Counts& Counts::operator+=(const Counts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

EvaluationReport evaluate(std::span<const std::vector<ScoredSpan>> predicted,
                          std::span<const std::vector<GoldSpan>> gold) {
  if (predicted.size() != gold.size()) {
    throw UsageError("evaluate: " + std::to_string(predicted.size()) +
                     " predicted sentences vs " + std::to_string(gold.size()) + " gold");
  }
  using Key = std::tuple<std::size_t, std::size_t, std::size_t>;
  EvaluationReport report;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::set<Key> truth;
    for (const GoldSpan& g : gold[i]) truth.insert({g.start, g.end, g.type});
    std::set<Key> guessed;
    for (const ScoredSpan& p : predicted[i]) guessed.insert({p.start, p.end, p.type});
    for (const Key& k : guessed) {
      Counts& c = report.per_type[std::get<2>(k)];
      if (truth.count(k)) {
        ++c.tp;
      } else {
        ++c.fp;
      }
    }
    for (const Key& k : truth) {
      if (!guessed.count(k)) ++report.per_type[std::get<2>(k)].fn;
    }
  }
  for (const auto& [type, counts] : report.per_type) report.micro += counts;
  return report;
}

std::string format_report(const EvaluationReport& report, const SymbolTable& types) {
  std::string out;
  char line[160];
  auto emit = [&](const std::string& name, const Counts& c) {
    std::snprintf(line, sizeof line, "%-10s P=%6.2f R=%6.2f F1=%6.2f (tp=%zu fp=%zu fn=%zu)\n",
                  name.c_str(), c.precision(), c.recall(), c.f1(), c.tp, c.fp, c.fn);
    out += line;
  };
  emit("micro", report.micro);
  for (const auto& [type, counts] : report.per_type) {
    emit(type < types.size() ? types.symbol(type) : std::to_string(type), counts);
  }
  return out;
}

}  // namespace lemon
