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

#ifndef LEMON_MODEL_H_
#define LEMON_MODEL_H_

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lemon/config.h"
#include "lemon/corpus.h"
#include "lemon/embeddings.h"
#include "lemon/encoders.h"
#include "lemon/lexicon.h"
#include "lemon/rng.h"
#include "lemon/tape.h"

namespace lemon {

// Per-sentence work that does not depend on parameters: candidate spans,
// their lexicon memories and their training labels.
struct PreparedSentence {
  std::vector<Span> spans;
  std::vector<MemoryLayout> layouts;
  std::vector<std::size_t> labels;  // gold type per span, 0 for NONE
};

struct ForwardResult {
  num::Var logits;                // [spans x classes]
  std::vector<double> attention;  // flattened, aligned with memory rows
  std::vector<std::size_t> memory_offsets;
};

struct SentencePrediction {
  num::Tensor probs;  // [spans x classes]
  std::vector<double> attention;
  std::vector<std::size_t> memory_offsets;
};

class Model {
 public:
  // Initializes every parameter from `rng`. Throws ConfigError when the
  // configuration is invalid.
  Model(ModelConfig config, Vocabularies vocab, Lexicon lexicon, Rng& rng);

  const ModelConfig& config() const { return config_; }
  // Only the non-structural settings may change after construction.
  void set_training_options(const ModelConfig& config);

  const Vocabularies& vocab() const { return vocab_; }
  const Lexicon& lexicon() const { return lexicon_; }
  const BucketLayout& buckets() const { return buckets_; }
  std::size_t num_classes() const { return vocab_.num_types(); }

  // Parameters in a fixed (name) order.
  const std::vector<num::Parameter*>& parameters() { return order_; }
  num::Parameter& parameter(const std::string& name);
  bool has_parameter(const std::string& name) const { return params_.count(name) > 0; }

  CoverageReport load_lexicon_embeddings(const EmbeddingFile& file, Rng& rng);
  CoverageReport load_char_embeddings(const EmbeddingFile& file, Rng& rng);

  PreparedSentence prepare(const Sentence& sentence) const;

  ForwardResult forward(num::Tape& tape, const Sentence& sentence,
                        const PreparedSentence& prepared, bool training, Rng& rng);

  // Training objective for one sentence: focal or cross-entropy loss summed
  // over its spans. NONE spans are subsampled when none_keep < 1.
  num::Var loss(num::Tape& tape, const ForwardResult& result,
                const PreparedSentence& prepared, bool training, Rng& rng);

  SentencePrediction predict(const Sentence& sentence, const PreparedSentence& prepared);

  // Row-sliced view of the head: logits from [f ++ context] rows.
  num::Var classify(num::Tape& tape, num::Var representation);

 private:
  num::Parameter& add(const std::string& name, num::Tensor value, bool sparse = false);
  void apply_freezing();
  std::vector<BiLstmParameters> char_layers();
  BiLstmParameters fragment_rnn();
  MemoryTables memory_tables();

  ModelConfig config_;
  Vocabularies vocab_;
  Lexicon lexicon_;
  BucketLayout buckets_;
  std::map<std::string, num::Parameter> params_;
  std::vector<num::Parameter*> order_;
};

}  // namespace lemon

#endif  // LEMON_MODEL_H_
