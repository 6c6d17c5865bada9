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

#ifndef LEMON_CONFIG_H_
#define LEMON_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lemon/decode.h"
#include "lemon/encoders.h"

namespace lemon {

enum class LossKind { kFocal, kCrossEntropy };

LossKind parse_loss(const std::string& name);
std::string to_string(LossKind kind);

using ConfigPairs = std::vector<std::pair<std::string, std::string>>;

struct ModelConfig {
  // Structural: these decide parameter shapes and the forward computation.
  std::size_t char_dim = 50;
  std::size_t seg_dim = 25;
  std::size_t pos_dim = 25;
  std::size_t lex_dim = 50;
  std::size_t mode_dim = 20;
  std::size_t bucket_k = 2;
  std::size_t bucket_cap = 8;
  std::size_t max_span = 10;
  CharEncoderKind char_encoder = CharEncoderKind::kBiRnn;
  std::size_t char_hidden = 128;
  std::size_t char_layers = 2;
  FragmentEncoderKind fragment_encoder = FragmentEncoderKind::kFofe;
  std::size_t fragment_hidden = 128;
  double fofe_alpha = 0.5;
  std::vector<std::size_t> head_hidden = {256, 256};
  bool use_lexicon = true;

  // Training behaviour.
  double dropout = 0.3;
  bool freeze_lexicon = true;
  bool learn_alpha = true;
  LossKind loss = LossKind::kFocal;
  double gamma = 2.0;
  double none_keep = 1.0;

  std::size_t seg_labels() const { return 4; }
  std::size_t char_feature_dim() const { return char_dim + seg_dim + pos_dim; }
  std::size_t context_dim() const;
  std::size_t fragment_dim() const;
  std::size_t memory_dim() const { return lex_dim + mode_dim; }

  // Throws ConfigError naming the first field outside its domain.
  void validate() const;

  ConfigPairs to_pairs() const;
  // Throws ConfigError on an unknown key or a malformed value.
  void set(const std::string& key, const std::string& value);
  static bool is_structural(const std::string& key);
};

struct TrainConfig {
  std::size_t epochs = 30;
  std::size_t batch_size = 16;
  double learning_rate = 1e-3;
  double weight_decay = 1e-7;
  double clip_norm = 5.0;
  std::uint64_t seed = 1;
  DecodeConfig decode;

  void validate() const;
};

// Structural keys whose values differ, formatted "key: a vs b".
std::vector<std::string> structural_mismatches(const ModelConfig& a, const ModelConfig& b);

}  // namespace lemon

#endif  // LEMON_CONFIG_H_
