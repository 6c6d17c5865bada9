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

#ifndef LEMON_EMBEDDINGS_H_
#define LEMON_EMBEDDINGS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lemon/rng.h"
#include "lemon/tensor.h"

namespace lemon {

// Text embedding file: "token v1 ... vd" per line, with an optional
// "count dim" header line.
struct EmbeddingFile {
  std::size_t dim = 0;  // 0 only for an empty file
  std::vector<std::string> tokens;
  std::vector<std::vector<double>> vectors;

  std::size_t size() const { return tokens.size(); }
};

EmbeddingFile read_embedding_file(std::istream& in);
EmbeddingFile read_embedding_file(const std::filesystem::path& path);
void write_embedding_file(std::ostream& out, const EmbeddingFile& file,
                          bool with_header = true);

struct CoverageReport {
  std::size_t covered = 0;
  std::size_t total = 0;
  double hit_rate() const {
    return total ? static_cast<double>(covered) / static_cast<double>(total) : 0.0;
  }
  std::string describe(const std::string& table_name) const;
};

// Copies the file's vector for every token it covers into the matching row of
// `table` (row i belongs to tokens[i]); every other row is drawn uniformly
// from (-0.1, 0.1). The first `reserved` rows are initialized randomly and
// excluded from the coverage counts. Throws ConfigError on a width mismatch.
CoverageReport load_embeddings(const EmbeddingFile& file,
                               std::span<const std::string> tokens,
                               num::Tensor& table, Rng& rng,
                               std::size_t reserved = 0);

}  // namespace lemon

#endif  // LEMON_EMBEDDINGS_H_
