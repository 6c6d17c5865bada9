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

#include "lemon/config.h"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "lemon/error.h"

namespace lemon {
namespace {

const char* kStructural[] = {"char_dim",    "seg_dim",        "pos_dim",         "lex_dim",
                             "mode_dim",    "bucket_k",       "bucket_cap",      "max_span",
                             "char_encoder", "char_hidden",   "char_layers",     "fragment_encoder",
                             "fragment_hidden", "fofe_alpha", "head_hidden",     "use_lexicon"};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double out = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size()) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::vector<std::size_t> parse_list(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_size(key, item));
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

LossKind parse_loss(const std::string& name) {
  if (name == "focal") return LossKind::kFocal;
  if (name == "cross_entropy") return LossKind::kCrossEntropy;
  throw ConfigError("unknown loss '" + name + "' (focal|cross_entropy)");
}

std::string to_string(LossKind kind) {
  return kind == LossKind::kFocal ? "focal" : "cross_entropy";
}

std::size_t ModelConfig::context_dim() const {
  return char_encoder == CharEncoderKind::kBaseline ? char_feature_dim() : 2 * char_hidden;
}

std::size_t ModelConfig::fragment_dim() const {
  return fragment_encoder == FragmentEncoderKind::kBiRnn ? 2 * fragment_hidden : context_dim();
}

void ModelConfig::validate() const {
  require(char_dim > 0 && seg_dim > 0 && pos_dim > 0, "embedding widths must be positive");
  require(lex_dim > 0 && mode_dim > 0, "lex_dim and mode_dim must be positive");
  require(bucket_cap > 0, "bucket_cap must be positive");
  require(max_span > 0, "max_span must be positive");
  require(char_encoder == CharEncoderKind::kBaseline || (char_hidden > 0 && char_layers > 0),
          "birnn character encoder needs char_hidden and char_layers > 0");
  require(fragment_encoder != FragmentEncoderKind::kBiRnn || fragment_hidden > 0,
          "fragment_hidden must be positive");
  require(fofe_alpha > 0.0 && fofe_alpha < 1.0,
          "fofe_alpha must lie in (0, 1), got " + format_double(fofe_alpha));
  for (std::size_t h : head_hidden) require(h > 0, "head_hidden widths must be positive");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must lie in [0, 1)");
  require(gamma >= 0.0, "gamma must be non-negative, got " + format_double(gamma));
  require(none_keep > 0.0 && none_keep <= 1.0, "none_keep must lie in (0, 1]");
}

ConfigPairs ModelConfig::to_pairs() const {
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  return {
      {"char_dim", std::to_string(char_dim)},
      {"seg_dim", std::to_string(seg_dim)},
      {"pos_dim", std::to_string(pos_dim)},
      {"lex_dim", std::to_string(lex_dim)},
      {"mode_dim", std::to_string(mode_dim)},
      {"bucket_k", std::to_string(bucket_k)},
      {"bucket_cap", std::to_string(bucket_cap)},
      {"max_span", std::to_string(max_span)},
      {"char_encoder", to_string(char_encoder)},
      {"char_hidden", std::to_string(char_hidden)},
      {"char_layers", std::to_string(char_layers)},
      {"fragment_encoder", to_string(fragment_encoder)},
      {"fragment_hidden", std::to_string(fragment_hidden)},
      {"fofe_alpha", format_double(fofe_alpha)},
      {"head_hidden", join(head_hidden)},
      {"use_lexicon", b(use_lexicon)},
      {"dropout", format_double(dropout)},
      {"freeze_lexicon", b(freeze_lexicon)},
      {"learn_alpha", b(learn_alpha)},
      {"loss", to_string(loss)},
      {"gamma", format_double(gamma)},
      {"none_keep", format_double(none_keep)},
  };
}

void ModelConfig::set(const std::string& key, const std::string& value) {
  if (key == "char_dim") char_dim = parse_size(key, value);
  else if (key == "seg_dim") seg_dim = parse_size(key, value);
  else if (key == "pos_dim") pos_dim = parse_size(key, value);
  else if (key == "lex_dim") lex_dim = parse_size(key, value);
  else if (key == "mode_dim") mode_dim = parse_size(key, value);
  else if (key == "bucket_k") bucket_k = parse_size(key, value);
  else if (key == "bucket_cap") bucket_cap = parse_size(key, value);
  else if (key == "max_span") max_span = parse_size(key, value);
  else if (key == "char_encoder") char_encoder = parse_char_encoder(value);
  else if (key == "char_hidden") char_hidden = parse_size(key, value);
  else if (key == "char_layers") char_layers = parse_size(key, value);
  else if (key == "fragment_encoder") fragment_encoder = parse_fragment_encoder(value);
  else if (key == "fragment_hidden") fragment_hidden = parse_size(key, value);
  else if (key == "fofe_alpha") fofe_alpha = parse_double(key, value);
  else if (key == "head_hidden") head_hidden = parse_list(key, value);
  else if (key == "use_lexicon") use_lexicon = parse_bool(key, value);
  else if (key == "dropout") dropout = parse_double(key, value);
  else if (key == "freeze_lexicon") freeze_lexicon = parse_bool(key, value);
  else if (key == "learn_alpha") learn_alpha = parse_bool(key, value);
  else if (key == "loss") loss = parse_loss(value);
  else if (key == "gamma") gamma = parse_double(key, value);
  else if (key == "none_keep") none_keep = parse_double(key, value);
  else throw ConfigError("unknown model setting '" + key + "'");
}

bool ModelConfig::is_structural(const std::string& key) {
  for (const char* k : kStructural)
    if (key == k) return true;
  return false;
}

void TrainConfig::validate() const {
  require(epochs > 0, "epochs must be positive");
  require(batch_size > 0, "batch_size must be positive");
  require(learning_rate > 0.0, "learning rate must be positive");
  require(weight_decay >= 0.0, "weight decay must be non-negative");
  require(decode.threshold >= 0.0 && decode.threshold <= 1.0, "threshold must lie in [0, 1]");
}

std::vector<std::string> structural_mismatches(const ModelConfig& a, const ModelConfig& b) {
  std::vector<std::string> out;
  const auto pa = a.to_pairs();
  const auto pb = b.to_pairs();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (ModelConfig::is_structural(pa[i].first) && pa[i].second != pb[i].second) {
      out.push_back(pa[i].first + ": " + pa[i].second + " vs " + pb[i].second);
    }
  }
  return out;
}

}  // namespace lemon
