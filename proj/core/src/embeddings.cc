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

#include "lemon/embeddings.h"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "lemon/error.h"

namespace lemon {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string f;
  while (in >> f) fields.push_back(f);
  return fields;
}

bool is_unsigned(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

double parse_real(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("not a real number: '" + s + "'", line_no);
  }
}

}  // namespace

EmbeddingFile read_embedding_file(std::istream& in) {
  EmbeddingFile file;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split(line);
    if (fields.empty()) continue;
    if (first) {
      first = false;
      if (fields.size() == 2 && is_unsigned(fields[0]) && is_unsigned(fields[1])) {
        file.dim = std::stoul(fields[1]);
        continue;
      }
    }
    if (fields.size() < 2) throw ParseError("embedding row without values", line_no);
    const std::size_t dim = fields.size() - 1;
    if (file.dim == 0) file.dim = dim;
    if (dim != file.dim) {
      throw ParseError("embedding row has " + std::to_string(dim) +
                           " values, expected " + std::to_string(file.dim),
                       line_no);
    }
    std::vector<double> values;
    values.reserve(dim);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      values.push_back(parse_real(fields[i], line_no));
    }
    file.tokens.push_back(fields[0]);
    file.vectors.push_back(std::move(values));
  }
  return file;
}

EmbeddingFile read_embedding_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open embedding file '" + path.string() + "'");
  return read_embedding_file(in);
}

void write_embedding_file(std::ostream& out, const EmbeddingFile& file,
                          bool with_header) {
  if (with_header) out << file.size() << ' ' << file.dim << '\n';
  char buf[64];
  for (std::size_t i = 0; i < file.size(); ++i) {
    out << file.tokens[i];
    for (double v : file.vectors[i]) {
      std::snprintf(buf, sizeof buf, " %.17g", v);
      out << buf;
    }
    out << '\n';
  }
}

std::string CoverageReport::describe(const std::string& table_name) const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "embeddings %s: %zu/%zu covered (hit rate %.4f)",
                table_name.c_str(), covered, total, hit_rate());
  return buf;
}

CoverageReport load_embeddings(const EmbeddingFile& file,
                               std::span<const std::string> tokens,
                               num::Tensor& table, Rng& rng,
                               std::size_t reserved) {
  const std::size_t width = table.cols();
  if (table.rows() != tokens.size()) {
    throw ConfigError("embedding table has " + std::to_string(table.rows()) +
                      " rows for " + std::to_string(tokens.size()) + " tokens");
  }
  if (file.size() > 0 && file.dim != width) {
    throw ConfigError("embedding file dimension " + std::to_string(file.dim) +
                      " does not match table width " + std::to_string(width));
  }
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < file.size(); ++i) index.emplace(file.tokens[i], i);

  CoverageReport report;
  for (std::size_t r = 0; r < tokens.size(); ++r) {
    auto row = table.row(r);
    const bool counted = r >= reserved;
    if (counted) ++report.total;
    auto it = counted ? index.find(tokens[r]) : index.end();
    if (it != index.end()) {
      ++report.covered;
      const auto& v = file.vectors[it->second];
      std::copy(v.begin(), v.end(), row.begin());
    } else {
      for (double& x : row) x = rng.uniform(-0.1, 0.1);
    }
  }
  return report;
}

}  // namespace lemon
