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

#ifndef LEMON_LEXICON_H_
#define LEMON_LEXICON_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lemon/tape.h"
#include "lemon/tensor.h"

namespace lemon {

// Character trie over Unicode code points with word ids on terminal nodes.
class Trie {
 public:
  using Node = std::uint32_t;
  static constexpr Node kRoot = 0;

  Trie();

  void insert(std::u32string_view word, std::size_t id);
  std::optional<Node> child(Node node, char32_t c) const;
  std::optional<std::size_t> word_at(Node node) const;
  std::optional<std::size_t> find(std::u32string_view word) const;

  std::size_t node_count() const { return word_at_.size(); }
  std::size_t depth() const { return depth_; }

 private:
  static std::uint64_t key(Node node, char32_t c) {
    return (static_cast<std::uint64_t>(node) << 21) | static_cast<std::uint64_t>(c);
  }

  std::unordered_map<std::uint64_t, Node> edges_;
  std::vector<std::int64_t> word_at_;
  std::size_t depth_ = 0;
};

enum class MatchKind : std::uint8_t { kExact = 0, kPrefix = 1, kSuffix = 2, kInfix = 3 };

// How a lexicon word relates to a fragment. `k` is the matched length: the
// prefix/suffix length, or the word length for exact and infix matches. A
// prefix or suffix covering the whole fragment is always reported as kExact.
struct MatchMode {
  MatchKind kind = MatchKind::kExact;
  std::size_t k = 0;

  auto operator<=>(const MatchMode&) const = default;
};

struct LexiconMatch {
  MatchMode mode;
  std::size_t word = 0;

  auto operator<=>(const LexiconMatch&) const = default;
};

std::string describe(const MatchMode& mode);

struct LexiconEntry {
  std::u32string word;
  double frequency = 0.0;
};

// Word list with forward and reverse tries. Word ids start at 1; row 0 of the
// lexicon embedding table is reserved for <unk>.
class Lexicon {
 public:
  static constexpr std::size_t kUnkId = 0;

  Lexicon() = default;
  // Duplicates are merged (their frequencies summed). Throws ConfigError on an
  // empty list or an empty word.
  static Lexicon build(std::span<const LexiconEntry> entries);
  static Lexicon build(std::span<const std::u32string> words);

  // Number of distinct words.
  std::size_t size() const { return words_.size() - 1; }
  // Rows of the matching embedding table (words plus <unk>).
  std::size_t table_rows() const { return words_.size(); }

  const std::u32string& word(std::size_t id) const { return words_.at(id); }
  double frequency(std::size_t id) const { return frequency_.at(id); }
  std::optional<std::size_t> find(std::u32string_view word) const;
  // UTF-8 token per table row, "<unk>" first; used to load embeddings.
  std::vector<std::string> tokens() const;

  const Trie& forward_trie() const { return forward_; }
  const Trie& reverse_trie() const { return reverse_; }

  // Every (word, mode) relating a lexicon word to the fragment: exact,
  // k-prefix and k-suffix with k < |fragment|, and infix for occurrences
  // touching neither end. Ordered by (mode kind, k, word id). Throws
  // DomainError on an empty fragment.
  std::vector<LexiconMatch> match(std::u32string_view fragment) const;

 private:
  std::vector<std::u32string> words_{U""};
  std::vector<double> frequency_{0.0};
  Trie forward_;
  Trie reverse_;
};

// One word per line, UTF-8, optionally followed by a frequency column.
Lexicon read_lexicon(std::istream& in);
Lexicon read_lexicon(const std::filesystem::path& path);
void write_lexicon(std::ostream& out, const Lexicon& lexicon);

// LEMON-K bucket layout: [exact, prefix-1..K, suffix-1..K, prefix>K,
// suffix>K, infix], 2K+4 buckets. The bucket id doubles as the mode
// embedding id.
class BucketLayout {
 public:
  explicit BucketLayout(std::size_t k = 2) : k_(k) {}

  std::size_t max_k() const { return k_; }
  std::size_t count() const { return 2 * k_ + 4; }
  std::size_t bucket_of(const MatchMode& mode) const;
  std::string name(std::size_t bucket) const;

 private:
  std::size_t k_;
};

// A memory row is either a matched word in some bucket or, for an empty
// bucket, that bucket's learned null row.
struct MemoryRow {
  std::size_t bucket = 0;
  std::optional<std::size_t> word;

  auto operator<=>(const MemoryRow&) const = default;
};

struct MemoryLayout {
  std::vector<MemoryRow> rows;  // grouped by ascending bucket

  std::size_t size() const { return rows.size(); }
};

// Groups matches into buckets, keeping at most `cap` per bucket (longest k
// first, then higher frequency, then lower word id). Empty buckets receive a
// null row, so every layout has at least one row per bucket.
MemoryLayout bucketize(std::span<const LexiconMatch> matches,
                       const BucketLayout& buckets, const Lexicon& lexicon,
                       std::size_t cap = 8);

// Layout with null rows only, used when the lexicon pathway is disabled.
MemoryLayout null_memory(const BucketLayout& buckets);

// Embedding tables a memory row reads from. A real row is
// lex[word] ++ mode[bucket]; a null row is null_lex[bucket] ++ null_mode[bucket].
struct MemoryTables {
  num::Parameter* lex = nullptr;        // [table_rows x d_lex]
  num::Parameter* mode = nullptr;       // [buckets x d_mod]
  num::Parameter* null_lex = nullptr;   // [buckets x d_lex]
  num::Parameter* null_mode = nullptr;  // [buckets x d_mod]
};

num::Tensor assemble_memory(const MemoryLayout& layout, const MemoryTables& tables);

// Stacks the memories of several fragments into one [sum n_m x d_m] matrix on
// the tape; `offsets` (size layouts+1) receives each fragment's first row.
num::Var assemble_memories(num::Tape& tape, std::span<const MemoryLayout> layouts,
                           const MemoryTables& tables,
                           std::vector<std::size_t>& offsets);

}  // namespace lemon

#endif  // LEMON_LEXICON_H_
