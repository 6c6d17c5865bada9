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

#include "lemon/lexicon.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "lemon/error.h"
#include "lemon/utf8.h"

namespace lemon {

Trie::Trie() : word_at_(1, -1) {}

void Trie::insert(std::u32string_view word, std::size_t id) {
  Node node = kRoot;
  for (char32_t c : word) {
    auto [it, inserted] =
        edges_.emplace(key(node, c), static_cast<Node>(word_at_.size()));
    if (inserted) word_at_.push_back(-1);
    node = it->second;
  }
  word_at_[node] = static_cast<std::int64_t>(id);
  depth_ = std::max(depth_, word.size());
}

std::optional<Trie::Node> Trie::child(Node node, char32_t c) const {
  auto it = edges_.find(key(node, c));
  if (it == edges_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Trie::word_at(Node node) const {
  const std::int64_t id = word_at_[node];
  if (id < 0) return std::nullopt;
  return static_cast<std::size_t>(id);
}

std::optional<std::size_t> Trie::find(std::u32string_view word) const {
  Node node = kRoot;
  for (char32_t c : word) {
    auto next = child(node, c);
    if (!next) return std::nullopt;
    node = *next;
  }
  return word_at(node);
}

std::string describe(const MatchMode& mode) {
  switch (mode.kind) {
    case MatchKind::kExact:
      return "exact";
    case MatchKind::kPrefix:
      return "prefix-" + std::to_string(mode.k);
    case MatchKind::kSuffix:
      return "suffix-" + std::to_string(mode.k);
    case MatchKind::kInfix:
      return "infix";
  }
  return "?";
}

Lexicon Lexicon::build(std::span<const LexiconEntry> entries) {
  if (entries.empty()) throw ConfigError("lexicon word list is empty");
  Lexicon lex;
  for (const LexiconEntry& e : entries) {
    if (e.word.empty()) throw ConfigError("lexicon contains an empty word");
    if (auto id = lex.forward_.find(e.word)) {
      lex.frequency_[*id] += e.frequency;
      continue;
    }
    const std::size_t id = lex.words_.size();
    lex.words_.push_back(e.word);
    lex.frequency_.push_back(e.frequency);
    lex.forward_.insert(e.word, id);
    lex.reverse_.insert(std::u32string(e.word.rbegin(), e.word.rend()), id);
  }
  return lex;
}

Lexicon Lexicon::build(std::span<const std::u32string> words) {
  std::vector<LexiconEntry> entries;
  entries.reserve(words.size());
  for (const auto& w : words) entries.push_back({w, 0.0});
  return build(entries);
}

std::optional<std::size_t> Lexicon::find(std::u32string_view word) const {
  return forward_.find(word);
}

std::vector<std::string> Lexicon::tokens() const {
  std::vector<std::string> out;
  out.reserve(words_.size());
  out.emplace_back("<unk>");
  for (std::size_t i = 1; i < words_.size(); ++i) out.push_back(utf8_encode(words_[i]));
  return out;
}

std::vector<LexiconMatch> Lexicon::match(std::u32string_view fragment) const {
  if (fragment.empty()) throw DomainError("cannot match an empty fragment");
  const std::size_t len = fragment.size();
  std::vector<LexiconMatch> out;

  // Exact and prefixes: one walk from the first character.
  Trie::Node node = Trie::kRoot;
  for (std::size_t k = 1; k <= len; ++k) {
    auto next = forward_.child(node, fragment[k - 1]);
    if (!next) break;
    node = *next;
    if (auto id = forward_.word_at(node)) {
      out.push_back({k == len ? MatchMode{MatchKind::kExact, len}
                              : MatchMode{MatchKind::kPrefix, k},
                     *id});
    }
  }
  // Suffixes shorter than the fragment: one walk backwards from the end.
  node = Trie::kRoot;
  for (std::size_t k = 1; k < len; ++k) {
    auto next = reverse_.child(node, fragment[len - k]);
    if (!next) break;
    node = *next;
    if (auto id = reverse_.word_at(node)) {
      out.push_back({{MatchKind::kSuffix, k}, *id});
    }
  }
  // Infixes: occurrences inside [1, len-2].
  for (std::size_t start = 1; start + 1 < len; ++start) {
    node = Trie::kRoot;
    for (std::size_t pos = start; pos + 1 < len; ++pos) {
      auto next = forward_.child(node, fragment[pos]);
      if (!next) break;
      node = *next;
      if (auto id = forward_.word_at(node)) {
        out.push_back({{MatchKind::kInfix, pos - start + 1}, *id});
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Lexicon read_lexicon(std::istream& in) {
  std::vector<LexiconEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word, freq, extra;
    if (!(fields >> word)) continue;
    double frequency = 0.0;
    if (fields >> freq) {
      try {
        std::size_t used = 0;
        frequency = std::stod(freq, &used);
        if (used != freq.size()) throw std::invalid_argument(freq);
      } catch (const std::exception&) {
        throw ParseError("frequency column is not a number: '" + freq + "'", line_no);
      }
      if (fields >> extra) throw ParseError("lexicon line has more than two columns", line_no);
    }
    try {
      entries.push_back({utf8_decode(word), frequency});
    } catch (const DomainError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return Lexicon::build(entries);
}

Lexicon read_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lexicon file '" + path.string() + "'");
  return read_lexicon(in);
}

void write_lexicon(std::ostream& out, const Lexicon& lexicon) {
  for (std::size_t id = 1; id < lexicon.table_rows(); ++id) {
    out << utf8_encode(lexicon.word(id)) << '\t' << lexicon.frequency(id) << '\n';
  }
}

std::size_t BucketLayout::bucket_of(const MatchMode& mode) const {
  switch (mode.kind) {
    case MatchKind::kExact:
      return 0;
    case MatchKind::kPrefix:
      return mode.k <= k_ ? mode.k : 2 * k_ + 1;
    case MatchKind::kSuffix:
      return mode.k <= k_ ? k_ + mode.k : 2 * k_ + 2;
    case MatchKind::kInfix:
      return 2 * k_ + 3;
  }
  return 0;
}

std::string BucketLayout::name(std::size_t bucket) const {
  if (bucket == 0) return "exact";
  if (bucket <= k_) return "prefix-" + std::to_string(bucket);
  if (bucket <= 2 * k_) return "suffix-" + std::to_string(bucket - k_);
  if (bucket == 2 * k_ + 1) return "prefix>" + std::to_string(k_);
  if (bucket == 2 * k_ + 2) return "suffix>" + std::to_string(k_);
  if (bucket == 2 * k_ + 3) return "infix";
  throw DomainError("bucket id " + std::to_string(bucket) + " out of range");
}

MemoryLayout bucketize(std::span<const LexiconMatch> matches,
                       const BucketLayout& buckets, const Lexicon& lexicon,
                       std::size_t cap) {
  std::vector<std::vector<const LexiconMatch*>> grouped(buckets.count());
  for (const LexiconMatch& m : matches) grouped[buckets.bucket_of(m.mode)].push_back(&m);

  MemoryLayout layout;
  for (std::size_t b = 0; b < grouped.size(); ++b) {
    auto& group = grouped[b];
    if (group.empty()) {
      layout.rows.push_back({b, std::nullopt});
      continue;
    }
    std::stable_sort(group.begin(), group.end(),
                     [&](const LexiconMatch* x, const LexiconMatch* y) {
                       if (x->mode.k != y->mode.k) return x->mode.k > y->mode.k;
                       const double fx = lexicon.frequency(x->word);
                       const double fy = lexicon.frequency(y->word);
                       if (fx != fy) return fx > fy;
                       return x->word < y->word;
                     });
    if (group.size() > cap) group.resize(cap);
    for (const LexiconMatch* m : group) layout.rows.push_back({b, m->word});
  }
  return layout;
}

MemoryLayout null_memory(const BucketLayout& buckets) {
  MemoryLayout layout;
  for (std::size_t b = 0; b < buckets.count(); ++b) layout.rows.push_back({b, std::nullopt});
  return layout;
}

namespace {

void check_tables(const MemoryTables& t) {
  if (!t.lex || !t.mode || !t.null_lex || !t.null_mode) {
    throw UsageError("memory tables are incomplete");
  }
  if (t.lex->value().cols() != t.null_lex->value().cols() ||
      t.mode->value().cols() != t.null_mode->value().cols()) {
    throw DimensionError("null-row widths disagree with the embedding tables");
  }
}

void copy_row(const MemoryRow& row, const MemoryTables& t, double* dst) {
  const std::size_t d_lex = t.lex->value().cols();
  if (row.bucket >= t.mode->value().rows()) {
    throw DimensionError("bucket id " + std::to_string(row.bucket) + " out of range");
  }
  if (row.word) {
    if (*row.word >= t.lex->value().rows()) {
      throw DimensionError("lexicon word id " + std::to_string(*row.word) + " out of range");
    }
    auto lex = t.lex->value().row(*row.word);
    std::copy(lex.begin(), lex.end(), dst);
    auto mode = t.mode->value().row(row.bucket);
    std::copy(mode.begin(), mode.end(), dst + d_lex);
  } else {
    auto lex = t.null_lex->value().row(row.bucket);
    std::copy(lex.begin(), lex.end(), dst);
    auto mode = t.null_mode->value().row(row.bucket);
    std::copy(mode.begin(), mode.end(), dst + d_lex);
  }
}

}  // namespace

num::Tensor assemble_memory(const MemoryLayout& layout, const MemoryTables& tables) {
  check_tables(tables);
  const std::size_t d_m = tables.lex->value().cols() + tables.mode->value().cols();
  num::Tensor out({layout.size(), d_m});
  for (std::size_t r = 0; r < layout.size(); ++r) {
    copy_row(layout.rows[r], tables, out.data() + r * d_m);
  }
  return out;
}

num::Var assemble_memories(num::Tape& tape, std::span<const MemoryLayout> layouts,
                           const MemoryTables& tables,
                           std::vector<std::size_t>& offsets) {
  check_tables(tables);
  const std::size_t d_lex = tables.lex->value().cols();
  const std::size_t d_mod = tables.mode->value().cols();
  const std::size_t d_m = d_lex + d_mod;
  offsets.assign(1, 0);
  std::vector<MemoryRow> rows;
  for (const MemoryLayout& layout : layouts) {
    rows.insert(rows.end(), layout.rows.begin(), layout.rows.end());
    offsets.push_back(rows.size());
  }
  num::Tensor out({rows.size(), d_m});
  for (std::size_t r = 0; r < rows.size(); ++r) copy_row(rows[r], tables, out.data() + r * d_m);

  auto trainable = [&](num::Parameter* p) { return tape.recording() && !p->frozen(); };
  const bool tracked = trainable(tables.lex) || trainable(tables.mode) ||
                       trainable(tables.null_lex) || trainable(tables.null_mode);
  MemoryTables t = tables;
  return tape.push(std::move(out), tracked,
                   [t, rows = std::move(rows), d_lex, d_mod, d_m](const num::Tensor&,
                                                                  const num::Tensor& g) {
                     auto scatter = [](num::Parameter* p, std::size_t row, const double* src,
                                       std::size_t width) {
                       if (p->frozen()) return;
                       p->touch_row(row);
                       double* dst = p->grad().data() + row * width;
                       for (std::size_t j = 0; j < width; ++j) dst[j] += src[j];
                     };
                     for (std::size_t r = 0; r < rows.size(); ++r) {
                       const double* src = g.data() + r * d_m;
                       const MemoryRow& row = rows[r];
                       if (row.word) {
                         scatter(t.lex, *row.word, src, d_lex);
                         scatter(t.mode, row.bucket, src + d_lex, d_mod);
                       } else {
                         scatter(t.null_lex, row.bucket, src, d_lex);
                         scatter(t.null_mode, row.bucket, src + d_lex, d_mod);
                       }
                     }
                   });
}

}  // namespace lemon
