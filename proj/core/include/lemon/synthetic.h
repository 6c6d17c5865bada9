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

#ifndef LEMON_SYNTHETIC_H_
#define LEMON_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lemon/corpus.h"
#include "lemon/embeddings.h"
#include "lemon/lexicon.h"

namespace lemon {

// Toy corpus whose entities are a prefix word followed by a suffix word; the
// suffix decides the type. Some prefix and suffix words are withheld from the
// training split and spelled with characters that never occur in it, so only
// the lexicon (whose pretrained vectors cluster suffix words by type) can
// tell their type on the dev split.
struct SyntheticOptions {
  std::uint64_t seed = 7;
  std::size_t train_sentences = 200;
  std::size_t dev_sentences = 100;
  std::size_t prefix_words = 20;
  std::size_t suffix_words = 20;
  std::size_t held_out_prefixes = 4;
  std::size_t held_out_suffixes = 6;  // spread over the types
  std::size_t lexicon_size = 500;
  std::size_t embedding_dim = 50;
  double held_out_rate = 0.6;  // share of dev entities using a withheld word
};

struct SyntheticCorpus {
  std::vector<std::string> types;
  std::vector<AnnotatedSentence> train;
  std::vector<AnnotatedSentence> dev;
  std::vector<LexiconEntry> lexicon;
  EmbeddingFile embeddings;  // one vector per lexicon word
  std::vector<std::u32string> prefixes;
  std::vector<std::u32string> suffixes;
  std::vector<std::size_t> suffix_type;
};

SyntheticCorpus make_synthetic_corpus(const SyntheticOptions& options);

// Writes train.txt, dev.txt, lexicon.txt and lexicon.vec into `dir`.
void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

}  // namespace lemon

#endif  // LEMON_SYNTHETIC_H_
