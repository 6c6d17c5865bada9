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

#include "lemon/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "lemon/error.h"
#include "lemon/utf8.h"

namespace lemon {
namespace {

struct Tag {
  char prefix = 'O';  // O, B, I, M, E, S
  std::string type;
};

Tag split_tag(const std::string& tag, TagScheme scheme, std::size_t index) {
  if (tag == "O") return {};
  if (tag.size() < 3 || tag[1] != '-') {
    throw DomainError("malformed entity tag '" + tag + "' at character " +
                      std::to_string(index));
  }
  Tag out{tag[0], tag.substr(2)};
  const bool ok = scheme == TagScheme::kBio
                      ? (out.prefix == 'B' || out.prefix == 'I')
                      : (out.prefix == 'B' || out.prefix == 'M' ||
                         out.prefix == 'E' || out.prefix == 'S' ||
                         out.prefix == 'I');
  if (!ok) {
    throw DomainError("entity tag '" + tag + "' is not valid in this scheme");
  }
  if (scheme == TagScheme::kBmes && out.prefix == 'I') out.prefix = 'M';
  return out;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (in >> field) fields.push_back(field);
  return fields;
}

void warn(std::vector<std::string>* warnings, std::string message) {
  if (warnings) warnings->push_back(std::move(message));
}

}  // namespace

char seg_label_char(SegLabel label) {
  static constexpr char kChars[] = {'B', 'M', 'E', 'S'};
  return kChars[static_cast<int>(label)];
}

SegLabel parse_seg_label(std::string_view text) {
  if (text == "B") return SegLabel::kB;
  if (text == "M" || text == "I") return SegLabel::kM;
  if (text == "E") return SegLabel::kE;
  if (text == "S") return SegLabel::kS;
  throw DomainError("soft-word label must be one of B, M, E, S; got '" +
                    std::string(text) + "'");
}

TagScheme parse_tag_scheme(std::string_view name) {
  if (name == "column-bmes" || name == "bmes") return TagScheme::kBmes;
  if (name == "column-bio" || name == "bio") return TagScheme::kBio;
  throw ConfigError("unknown corpus format '" + std::string(name) +
                    "' (expected column-bmes or column-bio)");
}

std::vector<EntitySpan> tags_to_spans(std::span<const std::string> tags,
                                      TagScheme scheme,
                                      std::vector<std::string>* warnings) {
  std::vector<EntitySpan> spans;
  std::optional<EntitySpan> open;
  auto close_open = [&](std::size_t end) {
    if (open) {
      open->end = end;
      spans.push_back(*open);
      open.reset();
    }
  };

  for (std::size_t i = 0; i < tags.size(); ++i) {
    const Tag tag = split_tag(tags[i], scheme, i);
    switch (tag.prefix) {
      case 'O':
        if (open && scheme == TagScheme::kBmes) {
          warn(warnings, "unterminated " + open->type + " entity closed before O at character " +
                             std::to_string(i));
        }
        close_open(i - (open ? 1 : 0));
        break;
      case 'B':
        if (open && scheme == TagScheme::kBmes) {
          warn(warnings, "unterminated " + open->type + " entity closed before B- at character " +
                             std::to_string(i));
        }
        if (open) close_open(i - 1);
        open = EntitySpan{i, i, tag.type};
        break;
      case 'I':
      case 'M':
        if (!open || open->type != tag.type) {
          warn(warnings, std::string(1, tag.prefix) + "-" + tag.type +
                             " without a matching opener at character " +
                             std::to_string(i) + "; treated as B-" + tag.type);
          if (open) close_open(i - 1);
          open = EntitySpan{i, i, tag.type};
        }
        break;
      case 'E':
        if (!open || open->type != tag.type) {
          warn(warnings, "E-" + tag.type + " without a matching opener at character " +
                             std::to_string(i) + "; treated as S-" + tag.type);
          if (open) close_open(i - 1);
          spans.push_back({i, i, tag.type});
        } else {
          close_open(i);
        }
        break;
      case 'S':
        if (open) {
          warn(warnings, "unterminated " + open->type + " entity closed before S- at character " +
                             std::to_string(i));
          close_open(i - 1);
        }
        spans.push_back({i, i, tag.type});
        break;
    }
  }
  if (open) {
    if (scheme == TagScheme::kBmes) {
      warn(warnings, "unterminated " + open->type + " entity at end of sentence");
    }
    close_open(tags.size() - 1);
  }
  std::sort(spans.begin(), spans.end());
  spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
  return spans;
}

std::vector<std::string> spans_to_tags(std::size_t length,
                                       std::span<const EntitySpan> spans,
                                       TagScheme scheme) {
  std::vector<std::string> tags(length, "O");
  for (const EntitySpan& s : spans) {
    if (s.start > s.end || s.end >= length) {
      throw DomainError("span (" + std::to_string(s.start) + "," +
                        std::to_string(s.end) + ") outside sentence of length " +
                        std::to_string(length));
    }
    for (std::size_t i = s.start; i <= s.end; ++i) {
      if (tags[i] != "O") throw DomainError("overlapping spans cannot be tagged");
      if (scheme == TagScheme::kBio) {
        tags[i] = (i == s.start ? "B-" : "I-") + s.type;
      } else if (s.start == s.end) {
        tags[i] = "S-" + s.type;
      } else if (i == s.start) {
        tags[i] = "B-" + s.type;
      } else if (i == s.end) {
        tags[i] = "E-" + s.type;
      } else {
        tags[i] = "M-" + s.type;
      }
    }
  }
  return tags;
}

std::vector<AnnotatedSentence> read_corpus(std::istream& in,
                                           const ReadOptions& options,
                                           ReadReport* report) {
  std::vector<AnnotatedSentence> corpus;
  AnnotatedSentence current;
  std::vector<std::string> tags;
  std::size_t first_line = 1;
  std::vector<std::string>* warnings = report ? &report->warnings : nullptr;

  auto flush = [&] {
    if (current.text.empty()) return;
    std::vector<std::string> local;
    current.entities = tags_to_spans(tags, options.scheme, &local);
    for (auto& w : local) {
      warn(warnings, "sentence starting at line " + std::to_string(first_line) + ": " + w);
    }
    if (options.max_sentence_length > 0 &&
        current.text.size() > options.max_sentence_length) {
      const std::size_t n = options.max_sentence_length;
      warn(warnings, "sentence starting at line " + std::to_string(first_line) +
                         " truncated from " + std::to_string(current.text.size()) +
                         " to " + std::to_string(n) + " characters");
      if (report) ++report->truncated_sentences;
      current.text.resize(n);
      current.seg.resize(n);
      current.pos.resize(n);
      std::erase_if(current.entities,
                    [n](const EntitySpan& s) { return s.end >= n; });
    }
    corpus.push_back(std::move(current));
    current = {};
    tags.clear();
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_fields(line);
    if (fields.empty()) {
      flush();
      continue;
    }
    if (current.text.empty()) first_line = line_no;
    if (fields.size() != 4) {
      throw ParseError("expected 4 columns (char, seg, pos, tag), found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    std::u32string ch;
    try {
      ch = utf8_decode(fields[0]);
      if (ch.size() != 1) throw DomainError("first column must hold exactly one character");
      current.seg.push_back(parse_seg_label(fields[1]));
      split_tag(fields[3], options.scheme, current.text.size());
    } catch (const DomainError& e) {
      throw ParseError(e.what(), line_no);
    }
    current.text.push_back(ch[0]);
    current.pos.push_back(fields[2]);
    tags.push_back(fields[3]);
  }
  flush();
  return corpus;
}

std::vector<AnnotatedSentence> read_corpus(const std::filesystem::path& path,
                                           const ReadOptions& options,
                                           ReadReport* report) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open corpus file '" + path.string() + "'");
  return read_corpus(in, options, report);
}

void write_corpus(std::ostream& out, std::span<const AnnotatedSentence> corpus,
                  TagScheme scheme) {
  for (const AnnotatedSentence& s : corpus) {
    const auto tags = spans_to_tags(s.size(), s.entities, scheme);
    for (std::size_t i = 0; i < s.size(); ++i) {
      out << utf8_encode(s.text[i]) << '\t' << seg_label_char(s.seg[i]) << '\t'
          << s.pos[i] << '\t' << tags[i] << '\n';
    }
    out << '\n';
  }
}

std::vector<SegLabel> derive_soft_word_labels(std::span<const std::u32string> words) {
  std::vector<SegLabel> labels;
  for (const auto& word : words) {
    if (word.empty()) throw AlignmentError("empty word in segmentation");
    if (word.size() == 1) {
      labels.push_back(SegLabel::kS);
      continue;
    }
    labels.push_back(SegLabel::kB);
    for (std::size_t i = 1; i + 1 < word.size(); ++i) labels.push_back(SegLabel::kM);
    labels.push_back(SegLabel::kE);
  }
  return labels;
}

std::vector<SegLabel> derive_soft_word_labels(std::span<const std::u32string> words,
                                              std::u32string_view text) {
  std::u32string joined;
  for (const auto& w : words) joined += w;
  if (joined != text) {
    throw AlignmentError("segmented words '" + utf8_encode(joined) +
                         "' do not spell the sentence '" + utf8_encode(text) + "'");
  }
  return derive_soft_word_labels(words);
}

void Vocabularies::extend(std::span<const AnnotatedSentence> corpus) {
  for (const AnnotatedSentence& s : corpus) {
    for (char32_t c : s.text) chars.add(utf8_encode(c));
    for (const auto& p : s.pos) pos.add(p);
    for (const auto& e : s.entities) types.add(e.type);
  }
}

Sentence encode_sentence(const AnnotatedSentence& sentence,
                         const Vocabularies& vocab) {
  const std::size_t n = sentence.size();
  if (sentence.seg.size() != n || sentence.pos.size() != n) {
    throw AlignmentError("label sequences differ in length from the text");
  }
  Sentence out;
  out.raw_text = sentence.text;
  out.chars.reserve(n);
  for (char32_t c : sentence.text) out.chars.push_back(vocab.chars.id(utf8_encode(c)));
  for (SegLabel l : sentence.seg) out.seg.push_back(static_cast<std::size_t>(l));
  for (const auto& p : sentence.pos) out.pos.push_back(vocab.pos.id(p));
  for (const EntitySpan& e : sentence.entities) {
    if (e.start > e.end || e.end >= n) {
      throw DomainError("gold span outside the sentence");
    }
    const auto type = vocab.types.find(e.type);
    if (!type) throw DomainError("entity type '" + e.type + "' is not in the vocabulary");
    out.gold.push_back({e.start, e.end, *type});
  }
  std::sort(out.gold.begin(), out.gold.end());
  out.gold.erase(std::unique(out.gold.begin(), out.gold.end()), out.gold.end());
  return out;
}

std::vector<Sentence> encode_corpus(std::span<const AnnotatedSentence> corpus,
                                    const Vocabularies& vocab) {
  std::vector<Sentence> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus) out.push_back(encode_sentence(s, vocab));
  return out;
}

AnnotatedSentence sentence_from_raw_text(std::u32string text) {
  AnnotatedSentence s;
  s.seg.assign(text.size(), SegLabel::kS);
  s.pos.assign(text.size(), std::string(kUnkToken));
  s.text = std::move(text);
  return s;
}

}  // namespace lemon
