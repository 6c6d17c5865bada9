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

#include <sstream>

#include <gtest/gtest.h>

#include "lemon/corpus.h"
#include "lemon/embeddings.h"
#include "lemon/error.h"
#include "lemon/rng.h"
#include "lemon/utf8.h"

namespace lemon {
namespace {

std::vector<AnnotatedSentence> parse(const std::string& text,
                                     TagScheme scheme = TagScheme::kBmes,
                                     ReadReport* report = nullptr) {
  std::istringstream in(text);
  return read_corpus(in, {.scheme = scheme}, report);
}

TEST(Utf8Test, RoundTripsMixedScripts) {
  const std::string s = "财政部 abc é 𝄞";
  const std::u32string u = utf8_decode(s);
  EXPECT_EQ(u.size(), 11u);
  EXPECT_EQ(utf8_encode(u), s);
  EXPECT_THROW(utf8_decode("\xE8\xB4"), DomainError);
}

TEST(ReadCorpusTest, BmesTagsBecomeOneSpan) {
  auto corpus = parse("张\tB\tNR\tB-PER\n三\tE\tNR\tE-PER\n说\tS\tVV\tO\n");
  ASSERT_EQ(corpus.size(), 1u);
  ASSERT_EQ(corpus[0].entities.size(), 1u);
  EXPECT_EQ(corpus[0].entities[0], (EntitySpan{0, 1, "PER"}));
  EXPECT_EQ(corpus[0].seg, (std::vector<SegLabel>{SegLabel::kB, SegLabel::kE, SegLabel::kS}));
}

TEST(ReadCorpusTest, EmptyFileIsEmptyCorpus) {
  EXPECT_TRUE(parse("").empty());
  EXPECT_TRUE(parse("\n\n").empty());
}

TEST(ReadCorpusTest, AllOutsideTagsGiveNoSpans) {
  auto corpus = parse("a S X O\nb S X O\n\nc S X O\n");
  ASSERT_EQ(corpus.size(), 2u);
  for (const auto& s : corpus) EXPECT_TRUE(s.entities.empty());
}

TEST(ReadCorpusTest, RaggedColumnsReportLineNumber) {
  try {
    parse("a S X O\nb S X\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ReadCorpusTest, InvalidSegLabelIsParseError) {
  EXPECT_THROW(parse("a Q X O\n"), ParseError);
}

TEST(ReadCorpusTest, BioInsideAfterOutsideIsRepairedAndLogged) {
  ReadReport report;
  auto corpus = parse("a S X O\nb S X I-LOC\nc S X I-LOC\n", TagScheme::kBio, &report);
  ASSERT_EQ(corpus[0].entities.size(), 1u);
  EXPECT_EQ(corpus[0].entities[0], (EntitySpan{1, 2, "LOC"}));
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_NE(report.warnings[0].find("treated as B-LOC"), std::string::npos);
}

TEST(ReadCorpusTest, BmesEndWithoutOpenerBecomesSingle) {
  ReadReport report;
  auto corpus = parse("a S X O\nb S X E-ORG\n", TagScheme::kBmes, &report);
  ASSERT_EQ(corpus[0].entities.size(), 1u);
  EXPECT_EQ(corpus[0].entities[0], (EntitySpan{1, 1, "ORG"}));
  EXPECT_EQ(report.warnings.size(), 1u);
}

TEST(ReadCorpusTest, LongSentencesAreTruncatedAndLogged) {
  std::string text;
  for (int i = 0; i < 6; ++i) text += "x S X " + std::string(i == 4 ? "S-PER" : "O") + "\n";
  ReadReport report;
  std::istringstream in(text);
  auto corpus = read_corpus(in, {.scheme = TagScheme::kBmes, .max_sentence_length = 4}, &report);
  EXPECT_EQ(corpus[0].size(), 4u);
  EXPECT_TRUE(corpus[0].entities.empty());
  EXPECT_EQ(report.truncated_sentences, 1u);
}

TEST(TagRoundTripTest, SpansToTagsToSpansIsIdentity) {
  Rng rng(17);
  const char* types[] = {"PER", "ORG", "LOC"};
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(30);
    std::vector<EntitySpan> spans;
    std::size_t i = 0;
    while (i < n) {
      if (rng.bernoulli(0.4)) {
        const std::size_t len = 1 + rng.below(std::min<std::size_t>(5, n - i));
        spans.push_back({i, i + len - 1, types[rng.below(3)]});
        i += len;
      } else {
        ++i;
      }
    }
    for (TagScheme scheme : {TagScheme::kBmes, TagScheme::kBio}) {
      const auto tags = spans_to_tags(n, spans, scheme);
      std::vector<std::string> warnings;
      EXPECT_EQ(tags_to_spans(tags, scheme, &warnings), spans);
      EXPECT_TRUE(warnings.empty());
    }
  }
}

TEST(SoftWordTest, SingleCharacterWord) {
  std::vector<std::u32string> words = {U"我"};
  EXPECT_EQ(derive_soft_word_labels(words), std::vector<SegLabel>{SegLabel::kS});
}

TEST(SoftWordTest, ThreeCharacterWord) {
  std::vector<std::u32string> words = {U"财政部"};
  EXPECT_EQ(derive_soft_word_labels(words),
            (std::vector<SegLabel>{SegLabel::kB, SegLabel::kM, SegLabel::kE}));
}

TEST(SoftWordTest, TwoWords) {
  std::vector<std::u32string> words = {U"AB", U"C"};
  EXPECT_EQ(derive_soft_word_labels(words, U"ABC"),
            (std::vector<SegLabel>{SegLabel::kB, SegLabel::kE, SegLabel::kS}));
}

TEST(SoftWordTest, MisalignedWordsThrow) {
  std::vector<std::u32string> words = {U"AB", U"D"};
  EXPECT_THROW(derive_soft_word_labels(words, U"ABC"), AlignmentError);
}

TEST(SoftWordTest, LengthEqualsCharacterCount) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::u32string> words;
    std::size_t total = 0;
    for (std::size_t w = 0, n = 1 + rng.below(8); w < n; ++w) {
      words.emplace_back(1 + rng.below(5), U'x');
      total += words.back().size();
    }
    EXPECT_EQ(derive_soft_word_labels(words).size(), total);
  }
}

TEST(VocabTest, EncodeMapsUnknownsToUnk) {
  auto train = parse("a S NN S-PER\nb S VV O\n");
  Vocabularies vocab;
  vocab.extend(train);
  EXPECT_EQ(vocab.types.symbol(0), "NONE");
  EXPECT_EQ(vocab.types.size(), 2u);
  auto test = parse("z S JJ O\n");
  Sentence s = encode_sentence(test[0], vocab);
  EXPECT_EQ(s.chars[0], *vocab.chars.unk_id());
  EXPECT_EQ(s.pos[0], *vocab.pos.unk_id());
  auto bad = parse("a S NN S-GPE\n");
  EXPECT_THROW(encode_sentence(bad[0], vocab), DomainError);
}

TEST(EmbeddingTest, FullCoverageCopiesRowsExactly) {
  std::istringstream in("2 3\nx 0.5 -1 2\ny 1e-3 0 7\n");
  EmbeddingFile file = read_embedding_file(in);
  std::vector<std::string> tokens = {"x", "y"};
  num::Tensor table({2, 3});
  Rng rng(1);
  CoverageReport report = load_embeddings(file, tokens, table, rng);
  EXPECT_EQ(report.hit_rate(), 1.0);
  EXPECT_EQ(table, num::Tensor::matrix({{0.5, -1, 2}, {1e-3, 0, 7}}));
}

TEST(EmbeddingTest, EmptyFileRandomizesEverything) {
  std::istringstream in("");
  EmbeddingFile file = read_embedding_file(in);
  std::vector<std::string> tokens = {"x", "y", "z"};
  num::Tensor table({3, 4});
  Rng rng(1);
  CoverageReport report = load_embeddings(file, tokens, table, rng);
  EXPECT_EQ(report.hit_rate(), 0.0);
  for (double v : table.values()) {
    EXPECT_GT(v, -0.1);
    EXPECT_LT(v, 0.1);
    EXPECT_NE(v, 0.0);
  }
}

TEST(EmbeddingTest, ThreeOfFourCovered) {
  std::istringstream in("a 1 1\nb 2 2\nc 3 3\nq 9 9\n");
  EmbeddingFile file = read_embedding_file(in);
  std::vector<std::string> tokens = {"<pad>", "a", "b", "c", "d"};
  num::Tensor table({5, 2});
  Rng rng(1);
  CoverageReport report = load_embeddings(file, tokens, table, rng, /*reserved=*/1);
  EXPECT_EQ(report.covered, 3u);
  EXPECT_EQ(report.total, 4u);
  EXPECT_DOUBLE_EQ(report.hit_rate(), 0.75);
}

TEST(EmbeddingTest, DimensionMismatchIsConfigError) {
  std::istringstream in("a 1 1\n");
  EmbeddingFile file = read_embedding_file(in);
  std::vector<std::string> tokens = {"a"};
  num::Tensor table({1, 3});
  Rng rng(1);
  EXPECT_THROW(load_embeddings(file, tokens, table, rng), ConfigError);
}

TEST(EmbeddingTest, RaggedRowIsParseError) {
  std::istringstream in("a 1 1\nb 1\n");
  EXPECT_THROW(read_embedding_file(in), ParseError);
}

}  // namespace
}  // namespace lemon
