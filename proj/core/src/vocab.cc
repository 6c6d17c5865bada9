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

#include "lemon/vocab.h"

#include "lemon/error.h"

namespace lemon {

SymbolTable::SymbolTable(std::vector<std::string> reserved,
                         std::optional<std::size_t> unk_id)
    : reserved_(reserved.size()), unk_(unk_id) {
  for (auto& s : reserved) add(s);
}

std::size_t SymbolTable::add(std::string_view symbol) {
  auto [it, inserted] = index_.emplace(std::string(symbol), symbols_.size());
  if (inserted) symbols_.emplace_back(symbol);
  return it->second;
}

std::optional<std::size_t> SymbolTable::find(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t SymbolTable::id(std::string_view symbol) const {
  if (auto found = find(symbol)) return *found;
  if (unk_) return *unk_;
  throw DomainError("unknown symbol '" + std::string(symbol) + "'");
}

SymbolTable make_char_table() {
  return SymbolTable({std::string(kPadToken), std::string(kUnkToken)}, 1);
}

SymbolTable make_pos_table() {
  return SymbolTable({std::string(kPadToken), std::string(kUnkToken)}, 1);
}

SymbolTable make_type_table() {
  return SymbolTable({std::string(kNoneLabel)});
}

}  // namespace lemon
