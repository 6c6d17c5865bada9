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

#ifndef LEMON_VOCAB_H_
#define LEMON_VOCAB_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lemon {

inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kUnkToken = "<unk>";
inline constexpr std::string_view kNoneLabel = "NONE";

// Bidirectional symbol <-> dense id map. Reserved symbols occupy the first
// ids in the order given at construction.
class SymbolTable {
 public:
  SymbolTable() = default;
  explicit SymbolTable(std::vector<std::string> reserved,
                       std::optional<std::size_t> unk_id = std::nullopt);

  std::size_t add(std::string_view symbol);
  std::optional<std::size_t> find(std::string_view symbol) const;
  // Falls back to the UNK id; throws DomainError if there is none.
  std::size_t id(std::string_view symbol) const;
  const std::string& symbol(std::size_t id) const { return symbols_.at(id); }

  std::size_t size() const { return symbols_.size(); }
  std::size_t reserved_count() const { return reserved_; }
  std::optional<std::size_t> unk_id() const { return unk_; }
  std::span<const std::string> symbols() const { return symbols_; }

  friend bool operator==(const SymbolTable& a, const SymbolTable& b) {
    return a.symbols_ == b.symbols_ && a.reserved_ == b.reserved_ &&
           a.unk_ == b.unk_;
  }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t reserved_ = 0;
  std::optional<std::size_t> unk_;
};

// Character table: <pad>=0, <unk>=1.
SymbolTable make_char_table();
// POS table: <pad>=0, <unk>=1.
SymbolTable make_pos_table();
// Entity types: NONE=0, every real type after it.
SymbolTable make_type_table();

}  // namespace lemon

#endif  // LEMON_VOCAB_H_
