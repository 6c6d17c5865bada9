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

#ifndef LEMON_CORPUS_H_
#define LEMON_CORPUS_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lemon/vocab.h"

namespace lemon {

// Soft-word boundary tag from word segmentation.
enum class SegLabel : std::uint8_t { kB = 0, kM = 1, kE = 2, kS = 3 };
inline constexpr std::size_t kNumSegLabels = 4;

char seg_label_char(SegLabel label);
SegLabel parse_seg_label(std::string_view text);  // throws DomainError

// Inclusive character span carrying an entity type name.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;  // inclusive
  std::string type;

  auto operator<=>(const EntitySpan&) const = default;
};

// One sentence as read from disk, before vocabulary lookup.
struct AnnotatedSentence {
  std::u32string text;
  std::vector<SegLabel> seg;
  std::vector<std::string> pos;
  std::vector<EntitySpan> entities;

  std::size_t size() const { return text.size(); }
};

// Entity tag schemes of the fourth column. kBmes accepts B-/M-/E-/S- (I- is
// read as M-), kBio accepts B-/I-.
enum class TagScheme { kBmes, kBio };
TagScheme parse_tag_scheme(std::string_view name);  // "column-bmes" | "column-bio"

struct ReadOptions {
  TagScheme scheme = TagScheme::kBmes;
  std::size_t max_sentence_length = 256;
};

struct ReadReport {
  std::vector<std::string> warnings;  // repaired tags and truncations
  std::size_t truncated_sentences = 0;
};

// Reads the four-column format (char, seg, pos, entity tag), blank-line
// separated. Fields may be separated by tabs or spaces.
std::vector<AnnotatedSentence> read_corpus(std::istream& in,
                                           const ReadOptions& options = {},
                                           ReadReport* report = nullptr);
std::vector<AnnotatedSentence> read_corpus(const std::filesystem::path& path,
                                           const ReadOptions& options = {},
                                           ReadReport* report = nullptr);

// Decodes per-character tags to spans. Malformed transitions are repaired
// (an inside tag with no matching opener starts a new entity) and described
// in `warnings` when given.
std::vector<EntitySpan> tags_to_spans(std::span<const std::string> tags,
                                      TagScheme scheme,
                                      std::vector<std::string>* warnings = nullptr);
// Inverse of tags_to_spans for non-overlapping spans.
std::vector<std::string> spans_to_tags(std::size_t length,
                                       std::span<const EntitySpan> spans,
                                       TagScheme scheme);

void write_corpus(std::ostream& out, std::span<const AnnotatedSentence> corpus,
                  TagScheme scheme = TagScheme::kBmes);

// BMES labels for a segmented sentence: S for one-character words, otherwise
// B M... E. Throws AlignmentError if the words do not spell `text`.
std::vector<SegLabel> derive_soft_word_labels(std::span<const std::u32string> words);
std::vector<SegLabel> derive_soft_word_labels(std::span<const std::u32string> words,
                                              std::u32string_view text);

// Gold span with its type resolved to an id (never the NONE id).
struct GoldSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t type = 0;

  auto operator<=>(const GoldSpan&) const = default;
};

// A sentence mapped to vocabulary ids.
struct Sentence {
  std::u32string raw_text;
  std::vector<std::size_t> chars;
  std::vector<std::size_t> seg;
  std::vector<std::size_t> pos;
  std::vector<GoldSpan> gold;

  std::size_t size() const { return chars.size(); }
};

struct Vocabularies {
  SymbolTable chars = make_char_table();
  SymbolTable pos = make_pos_table();
  SymbolTable types = make_type_table();

  // Adds every character, POS tag and entity type of the corpus.
  void extend(std::span<const AnnotatedSentence> corpus);
  std::size_t none_type() const { return 0; }
  std::size_t num_types() const { return types.size(); }
};

// Unknown characters and POS tags map to UNK; an unknown entity type is a
// DomainError.
Sentence encode_sentence(const AnnotatedSentence& sentence,
                         const Vocabularies& vocab);
std::vector<Sentence> encode_corpus(std::span<const AnnotatedSentence> corpus,
                                    const Vocabularies& vocab);

// Raw text for prediction: every character is its own word (S) with UNK POS.
AnnotatedSentence sentence_from_raw_text(std::u32string text);

}  // namespace lemon

#endif  // LEMON_CORPUS_H_
