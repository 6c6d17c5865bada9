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

// Small hand-built corpora and configurations for model-level tests.
#ifndef LEMON_TESTS_MODEL_FIXTURES_H_
#define LEMON_TESTS_MODEL_FIXTURES_H_

#include <memory>
#include <string>
#include <vector>

#include "lemon/model.h"
#include "lemon/trainer.h"
#include "lemon/utf8.h"

namespace lemon::testing {

inline AnnotatedSentence annotated(const std::string& text, std::vector<EntitySpan> entities) {
  AnnotatedSentence s;
  s.text = utf8_decode(text);
  s.seg.assign(s.text.size(), SegLabel::kS);
  if (s.text.size() > 1) {
    s.seg[0] = SegLabel::kB;
    s.seg[1] = SegLabel::kE;
  }
  for (std::size_t i = 0; i < s.text.size(); ++i) s.pos.push_back(i % 2 ? "NN" : "NR");
  s.entities = std::move(entities);
  return s;
}

// Two sentences, two entity types, a lexicon that produces exact, prefix,
// suffix and infix matches.
inline std::vector<AnnotatedSentence> micro_corpus() {
  return {annotated("张三在北京大学", {{0, 1, "PER"}, {3, 6, "ORG"}}),
          annotated("李四去大学城", {{0, 1, "PER"}})};
}

inline Lexicon micro_lexicon() {
  std::vector<LexiconEntry> entries = {{U"张三", 3}, {U"北京", 5}, {U"大学", 4}, {U"京大", 1},
                                       {U"学城", 2}, {U"李", 1},   {U"在", 1},   {U"北京大学", 2}};
  return Lexicon::build(entries);
}

inline ModelConfig tiny_config() {
  ModelConfig c;
  c.char_dim = 3;
  c.seg_dim = 2;
  c.pos_dim = 2;
  c.lex_dim = 3;
  c.mode_dim = 2;
  c.bucket_k = 1;
  c.max_span = 4;
  c.char_encoder = CharEncoderKind::kBaseline;
  c.fragment_encoder = FragmentEncoderKind::kFofe;
  c.head_hidden = {5};
  c.dropout = 0.0;
  return c;
}

struct MicroSetup {
  std::unique_ptr<Model> model;
  Dataset data;
};

inline MicroSetup micro_setup(const ModelConfig& config, std::uint64_t seed = 3) {
  const auto corpus = micro_corpus();
  Vocabularies vocab;
  vocab.extend(corpus);
  Rng rng(seed);
  MicroSetup s;
  s.model = std::make_unique<Model>(config, vocab, micro_lexicon(), rng);
  s.data = prepare_dataset(*s.model, encode_corpus(corpus, s.model->vocab()));
  return s;
}

}  // namespace lemon::testing

#endif  // LEMON_TESTS_MODEL_FIXTURES_H_
