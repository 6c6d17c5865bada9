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

#include "lemon/checkpoint.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lemon/error.h"
#include "lemon/utf8.h"

namespace lemon {
namespace {

constexpr const char* kMagic = "lemon-checkpoint 1";

std::string hex(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

void write_table(std::ostream& out, const char* name, const SymbolTable& table) {
  out << name << ' ' << table.size() - table.reserved_count() << '\n';
  for (std::size_t i = table.reserved_count(); i < table.size(); ++i) {
    out << table.symbol(i) << '\n';
  }
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) fail("unexpected end of checkpoint");
    ++line_;
    return s;
  }

  // Reads "<tag> <count>" and returns the count.
  std::size_t header(const std::string& tag) {
    std::istringstream ss(line());
    std::string got;
    std::size_t count = 0;
    if (!(ss >> got >> count) || got != tag) fail("expected section '" + tag + "'");
    return count;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }
  std::size_t line_number() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

void read_table(Reader& r, const std::string& tag, SymbolTable& table) {
  const std::size_t n = r.header(tag);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string symbol = r.line();
    if (table.find(symbol)) r.fail("duplicate symbol '" + symbol + "' in " + tag);
    table.add(symbol);
  }
}

}  // namespace

void save_checkpoint(std::ostream& out, Model& model) {
  out << kMagic << '\n';
  const auto pairs = model.config().to_pairs();
  out << "config " << pairs.size() << '\n';
  for (const auto& [k, v] : pairs) out << k << " = " << v << '\n';
  write_table(out, "chars", model.vocab().chars);
  write_table(out, "pos", model.vocab().pos);
  write_table(out, "types", model.vocab().types);
  const Lexicon& lex = model.lexicon();
  out << "lexicon " << lex.size() << '\n';
  for (std::size_t id = 1; id < lex.table_rows(); ++id) {
    out << utf8_encode(lex.word(id)) << '\t' << hex(lex.frequency(id)) << '\n';
  }
  out << "tensors " << model.parameters().size() << '\n';
  for (num::Parameter* p : model.parameters()) {
    const num::Tensor& t = p->value();
    out << p->name() << ' ' << t.rank();
    for (std::size_t d : t.shape()) out << ' ' << d;
    out << '\n';
    const std::size_t cols = t.rank() == 0 ? 1 : t.shape().back();
    for (std::size_t i = 0; i < t.size(); ++i) {
      out << hex(t[i]) << ((i + 1) % cols == 0 ? '\n' : ' ');
    }
  }
  out << "end\n";
}

void save_checkpoint(const std::filesystem::path& path, Model& model) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write checkpoint " + path.string());
  save_checkpoint(out, model);
  if (!out) throw ConfigError("failed while writing checkpoint " + path.string());
}

std::unique_ptr<Model> load_checkpoint(std::istream& in) {
  Reader r(in);
  if (r.line() != kMagic) r.fail("not a lemon checkpoint");
  ModelConfig config;
  for (std::size_t i = 0, n = r.header("config"); i < n; ++i) {
    const std::string s = r.line();
    const auto eq = s.find(" = ");
    if (eq == std::string::npos) r.fail("malformed config line '" + s + "'");
    config.set(s.substr(0, eq), s.substr(eq + 3));
  }
  Vocabularies vocab;
  read_table(r, "chars", vocab.chars);
  read_table(r, "pos", vocab.pos);
  read_table(r, "types", vocab.types);
  std::vector<LexiconEntry> entries;
  for (std::size_t i = 0, n = r.header("lexicon"); i < n; ++i) {
    const std::string s = r.line();
    const auto tab = s.find('\t');
    if (tab == std::string::npos) r.fail("malformed lexicon line");
    entries.push_back({utf8_decode(s.substr(0, tab)), std::strtod(s.c_str() + tab + 1, nullptr)});
  }
  Rng rng(0);
  auto model = std::make_unique<Model>(config, std::move(vocab), Lexicon::build(entries), rng);
  const std::size_t count = r.header("tensors");
  if (count != model->parameters().size()) {
    r.fail("checkpoint holds " + std::to_string(count) + " tensors, configuration needs " +
           std::to_string(model->parameters().size()));
  }
  for (std::size_t k = 0; k < count; ++k) {
    std::istringstream head(r.line());
    std::string name;
    std::size_t rank = 0;
    head >> name >> rank;
    num::Shape shape(rank);
    for (std::size_t& d : shape) head >> d;
    if (!head || !model->has_parameter(name)) r.fail("unexpected tensor '" + name + "'");
    num::Tensor& value = model->parameter(name).value();
    if (value.shape() != shape) {
      throw ConfigError("tensor '" + name + "' has shape " + num::shape_string(shape) +
                        " but the configuration needs " + num::shape_string(value.shape()));
    }
    const std::size_t cols = rank == 0 ? 1 : shape.back();
    for (std::size_t i = 0; i < value.size(); i += cols) {
      const std::string row = r.line();
      const char* p = row.c_str();
      for (std::size_t c = 0; c < cols; ++c) {
        char* end = nullptr;
        value[i + c] = std::strtod(p, &end);
        if (end == p) r.fail("bad number in tensor '" + name + "'");
        p = end;
      }
    }
  }
  if (r.line() != "end") r.fail("missing end marker");
  return model;
}

std::unique_ptr<Model> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint " + path.string());
  return load_checkpoint(in);
}

}  // namespace lemon
