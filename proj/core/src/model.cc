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

#include "lemon/model.h"

#include <cmath>

#include "lemon/error.h"
#include "lemon/layers.h"
#include "lemon/ops.h"

namespace lemon {
namespace {

using num::Tensor;
using num::Var;

Tensor uniform(Rng& rng, std::size_t rows, std::size_t cols, double limit) {
  Tensor t({rows, cols});
  for (double& v : t.values()) v = rng.uniform(-limit, limit);
  return t;
}

Tensor glorot(Rng& rng, std::size_t rows, std::size_t cols) {
  return uniform(rng, rows, cols, std::sqrt(6.0 / static_cast<double>(rows + cols)));
}

constexpr double kEmbeddingRange = 0.1;

}  // namespace

Model::Model(ModelConfig config, Vocabularies vocab, Lexicon lexicon, Rng& rng)
    : config_(std::move(config)),
      vocab_(std::move(vocab)),
      lexicon_(std::move(lexicon)),
      buckets_(config_.bucket_k) {
  config_.validate();
  const ModelConfig& c = config_;
  const std::size_t nb = buckets_.count();
  add("char_emb", uniform(rng, vocab_.chars.size(), c.char_dim, kEmbeddingRange), true);
  add("seg_emb", uniform(rng, c.seg_labels(), c.seg_dim, kEmbeddingRange), true);
  add("pos_emb", uniform(rng, vocab_.pos.size(), c.pos_dim, kEmbeddingRange), true);
  add("lex_emb", uniform(rng, lexicon_.table_rows(), c.lex_dim, kEmbeddingRange), true);
  add("mode_emb", uniform(rng, nb, c.mode_dim, kEmbeddingRange), true);
  add("null_lex", uniform(rng, nb, c.lex_dim, kEmbeddingRange), true);
  add("null_mode", uniform(rng, nb, c.mode_dim, kEmbeddingRange), true);

  auto add_lstm = [&](const std::string& prefix, std::size_t in, std::size_t h) {
    const double limit = 1.0 / std::sqrt(static_cast<double>(h));
    add(prefix + ".wx", uniform(rng, in, 4 * h, limit));
    add(prefix + ".wh", uniform(rng, h, 4 * h, limit));
    Tensor b({4 * h});
    for (std::size_t u = h; u < 2 * h; ++u) b[u] = 1.0;
    add(prefix + ".b", std::move(b));
  };
  if (c.char_encoder == CharEncoderKind::kBiRnn) {
    std::size_t in = c.char_feature_dim();
    for (std::size_t l = 0; l < c.char_layers; ++l) {
      add_lstm("char_rnn." + std::to_string(l) + ".fwd", in, c.char_hidden);
      add_lstm("char_rnn." + std::to_string(l) + ".bwd", in, c.char_hidden);
      in = 2 * c.char_hidden;
    }
  }
  if (c.fragment_encoder == FragmentEncoderKind::kBiRnn) {
    add_lstm("frag_rnn.fwd", c.context_dim(), c.fragment_hidden);
    add_lstm("frag_rnn.bwd", c.context_dim(), c.fragment_hidden);
  }
  add("attn_w", glorot(rng, c.fragment_dim(), c.memory_dim()));
  std::size_t in = c.fragment_dim() + c.memory_dim();
  for (std::size_t l = 0; l < c.head_hidden.size(); ++l) {
    add("head." + std::to_string(l) + ".w", glorot(rng, in, c.head_hidden[l]));
    add("head." + std::to_string(l) + ".b", Tensor({c.head_hidden[l]}));
    in = c.head_hidden[l];
  }
  add("out.w", glorot(rng, in, num_classes()));
  add("out.b", Tensor({num_classes()}));
  add("log_alpha", Tensor({num_classes()}));

  for (auto& [name, p] : params_) order_.push_back(&p);
  apply_freezing();
}

num::Parameter& Model::add(const std::string& name, Tensor value, bool sparse) {
  return params_.emplace(name, num::Parameter(name, std::move(value), sparse)).first->second;
}

num::Parameter& Model::parameter(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw UsageError("no parameter named '" + name + "'");
  return it->second;
}

void Model::apply_freezing() {
  params_.at("lex_emb").set_frozen(config_.freeze_lexicon);
  params_.at("log_alpha").set_frozen(!config_.learn_alpha);
}

void Model::set_training_options(const ModelConfig& config) {
  const auto diff = structural_mismatches(config_, config);
  if (!diff.empty()) throw ConfigError("structural setting changed: " + diff.front());
  config.validate();
  config_ = config;
  apply_freezing();
}

CoverageReport Model::load_lexicon_embeddings(const EmbeddingFile& file, Rng& rng) {
  const auto tokens = lexicon_.tokens();
  return load_embeddings(file, tokens, params_.at("lex_emb").value(), rng, 1);
}

CoverageReport Model::load_char_embeddings(const EmbeddingFile& file, Rng& rng) {
  const auto symbols = vocab_.chars.symbols();
  const std::vector<std::string> tokens(symbols.begin(), symbols.end());
  return load_embeddings(file, tokens, params_.at("char_emb").value(), rng,
                         vocab_.chars.reserved_count());
}

std::vector<BiLstmParameters> Model::char_layers() {
  std::vector<BiLstmParameters> layers;
  if (config_.char_encoder != CharEncoderKind::kBiRnn) return layers;
  for (std::size_t l = 0; l < config_.char_layers; ++l) {
    auto lstm = [&](const std::string& dir) {
      const std::string prefix = "char_rnn." + std::to_string(l) + "." + dir;
      return LstmParameters{&parameter(prefix + ".wx"), &parameter(prefix + ".wh"),
                            &parameter(prefix + ".b")};
    };
    layers.push_back({lstm("fwd"), lstm("bwd")});
  }
  return layers;
}

BiLstmParameters Model::fragment_rnn() {
  auto lstm = [&](const std::string& dir) {
    const std::string prefix = "frag_rnn." + dir;
    return LstmParameters{&parameter(prefix + ".wx"), &parameter(prefix + ".wh"),
                          &parameter(prefix + ".b")};
  };
  return {lstm("fwd"), lstm("bwd")};
}

MemoryTables Model::memory_tables() {
  return {&parameter("lex_emb"), &parameter("mode_emb"), &parameter("null_lex"),
          &parameter("null_mode")};
}

PreparedSentence Model::prepare(const Sentence& sentence) const {
  const std::size_t n = sentence.size();
  if (sentence.raw_text.size() != n || sentence.seg.size() != n || sentence.pos.size() != n) {
    throw DimensionError("sentence columns disagree in length");
  }
  PreparedSentence out;
  out.spans = enumerate_fragments(n, config_.max_span);
  out.layouts.reserve(out.spans.size());
  for (const Span& s : out.spans) {
    if (config_.use_lexicon) {
      const auto matches = lexicon_.match(
          std::u32string_view(sentence.raw_text).substr(s.start, s.length()));
      out.layouts.push_back(bucketize(matches, buckets_, lexicon_, config_.bucket_cap));
    } else {
      out.layouts.push_back(null_memory(buckets_));
    }
  }
  out.labels.assign(out.spans.size(), vocab_.none_type());
  for (const GoldSpan& g : sentence.gold) {
    if (g.end - g.start + 1 > config_.max_span) continue;
    // Spans are ordered by start, then end.
    std::size_t index = 0;
    for (std::size_t i = 0; i < g.start; ++i) index += std::min(config_.max_span, n - i);
    out.labels[index + (g.end - g.start)] = g.type;
  }
  return out;
}

Var Model::classify(num::Tape& tape, Var representation) {
  Var h = representation;
  for (std::size_t l = 0; l < config_.head_hidden.size(); ++l) {
    const std::string prefix = "head." + std::to_string(l);
    h = num::tanh(num::add_bias(num::matmul(h, tape.param(parameter(prefix + ".w"))),
                                tape.param(parameter(prefix + ".b"))));
  }
  return num::add_bias(num::matmul(h, tape.param(parameter("out.w"))),
                       tape.param(parameter("out.b")));
}

ForwardResult Model::forward(num::Tape& tape, const Sentence& sentence,
                             const PreparedSentence& prepared, bool training, Rng& rng) {
  ForwardResult result;
  if (prepared.spans.empty()) {
    result.logits = tape.constant(Tensor({0, num_classes()}));
    result.memory_offsets = {0};
    return result;
  }
  const Var features[] = {num::gather_rows(tape, parameter("char_emb"), sentence.chars),
                          num::gather_rows(tape, parameter("seg_emb"), sentence.seg),
                          num::gather_rows(tape, parameter("pos_emb"), sentence.pos)};
  Var w = num::dropout(num::hconcat(features), config_.dropout, training, rng);
  const auto layers = char_layers();
  Var t = encode_characters(tape, w, config_.char_encoder, layers);
  Var f;
  switch (config_.fragment_encoder) {
    case FragmentEncoderKind::kBow:
      f = encode_fragments_bow(t, prepared.spans);
      break;
    case FragmentEncoderKind::kFofe:
      f = encode_fragments_fofe(t, prepared.spans, config_.fofe_alpha);
      break;
    case FragmentEncoderKind::kBiRnn:
      f = encode_fragments_birnn(tape, t, prepared.spans, fragment_rnn());
      break;
  }
  Var memory = assemble_memories(tape, prepared.layouts, memory_tables(), result.memory_offsets);
  Var queries = num::matmul(f, tape.param(parameter("attn_w")));
  Var context = segmented_attention(queries, memory, result.memory_offsets, &result.attention);
  const Var parts[] = {f, context};
  result.logits = classify(tape, num::hconcat(parts));
  return result;
}

Var Model::loss(num::Tape& tape, const ForwardResult& result, const PreparedSentence& prepared,
                bool training, Rng& rng) {
  if (prepared.spans.empty()) return tape.constant(Tensor::vector({0.0}));
  std::vector<double> weights;
  if (training && config_.none_keep < 1.0) {
    weights.assign(prepared.labels.size(), 1.0);
    for (std::size_t s = 0; s < weights.size(); ++s) {
      if (prepared.labels[s] == vocab_.none_type() && rng.uniform() >= config_.none_keep) {
        weights[s] = 0.0;
      }
    }
  }
  if (config_.loss == LossKind::kCrossEntropy) {
    return cross_entropy(result.logits, prepared.labels, weights);
  }
  return focal_loss(result.logits, prepared.labels, tape.param(parameter("log_alpha")),
                    config_.gamma, weights);
}

SentencePrediction Model::predict(const Sentence& sentence, const PreparedSentence& prepared) {
  num::Tape tape(false);
  Rng unused(0);
  ForwardResult r = forward(tape, sentence, prepared, false, unused);
  SentencePrediction out;
  out.probs = prepared.spans.empty() ? Tensor({0, num_classes()}) : num::softmax(r.logits.value());
  out.attention = std::move(r.attention);
  out.memory_offsets = std::move(r.memory_offsets);
  return out;
}

}  // namespace lemon
