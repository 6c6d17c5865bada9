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

#include "lemon/synthetic.h"

#include <fstream>
#include <set>

#include "lemon/error.h"
#include "lemon/rng.h"
#include "lemon/utf8.h"

namespace lemon {
namespace {

constexpr char32_t kFillerBase = 0x4E00;   // 150 characters for ordinary words
constexpr char32_t kEntityBase = 0x5000;   // 100 characters for training entity words
constexpr char32_t kHeldOutBase = 0x5E00;  // 60 characters seen only on dev

class WordMaker {
 public:
  explicit WordMaker(Rng& rng) : rng_(rng) {}

  std::u32string make(char32_t base, std::size_t pool, std::size_t min_len, std::size_t max_len) {
    for (;;) {
      std::u32string w(min_len + rng_.below(max_len - min_len + 1), U' ');
      for (char32_t& c : w) c = base + static_cast<char32_t>(rng_.below(pool));
      if (used_.insert(w).second) return w;
    }
  }

 private:
  Rng& rng_;
  std::set<std::u32string> used_;
};

std::vector<double> around(Rng& rng, const std::vector<double>& centre, double noise) {
  std::vector<double> v(centre);
  for (double& x : v) x += rng.uniform(-noise, noise);
  return v;
}

}  // namespace

SyntheticCorpus make_synthetic_corpus(const SyntheticOptions& o) {
  if (o.held_out_prefixes >= o.prefix_words || o.held_out_suffixes >= o.suffix_words) {
    throw ConfigError("synthetic corpus must keep some prefix and suffix words for training");
  }
  Rng rng(o.seed);
  WordMaker words(rng);
  SyntheticCorpus out;
  out.types = {"PER", "ORG", "LOC"};
  const std::size_t num_types = out.types.size();

  // Held-out words come first in each list.
  for (std::size_t i = 0; i < o.prefix_words; ++i) {
    const bool held = i < o.held_out_prefixes;
    out.prefixes.push_back(held ? words.make(kHeldOutBase, 60, 2, 2) : words.make(kEntityBase, 100, 2, 2));
  }
  for (std::size_t i = 0; i < o.suffix_words; ++i) {
    const bool held = i < o.held_out_suffixes;
    out.suffixes.push_back(held ? words.make(kHeldOutBase, 60, 1, 2) : words.make(kEntityBase, 100, 1, 2));
    out.suffix_type.push_back(i % num_types);
  }
  std::vector<std::u32string> fillers;
  for (int i = 0; i < 60; ++i) fillers.push_back(words.make(kFillerBase, 150, 1, 3));

  std::vector<std::vector<double>> centres;
  for (std::size_t k = 0; k < num_types + 2; ++k) {
    std::vector<double> c(o.embedding_dim);
    for (double& x : c) x = rng.uniform(-1.0, 1.0);
    centres.push_back(std::move(c));
  }
  const auto& prefix_centre = centres[num_types];
  const auto& other_centre = centres[num_types + 1];
  out.embeddings.dim = o.embedding_dim;
  auto add_word = [&](const std::u32string& w, const std::vector<double>& centre) {
    out.lexicon.push_back({w, static_cast<double>(1 + rng.below(1000))});
    out.embeddings.tokens.push_back(utf8_encode(w));
    out.embeddings.vectors.push_back(around(rng, centre, 0.3));
  };
  for (const auto& w : out.prefixes) add_word(w, prefix_centre);
  for (std::size_t i = 0; i < out.suffixes.size(); ++i) {
    add_word(out.suffixes[i], centres[out.suffix_type[i]]);
  }
  for (const auto& w : fillers) add_word(w, other_centre);
  while (out.lexicon.size() < o.lexicon_size) {
    add_word(rng.bernoulli(0.5) ? words.make(kFillerBase, 150, 2, 3) : words.make(kEntityBase, 100, 2, 3),
             other_centre);
  }

  auto make_sentence = [&](bool dev) {
    AnnotatedSentence s;
    std::vector<std::u32string> tokens;
    const std::size_t length = 4 + rng.below(5);
    const std::size_t entities = 1 + rng.below(2);
    std::set<std::size_t> slots;
    while (slots.size() < entities) slots.insert(rng.below(length));
    for (std::size_t k = 0; k < length; ++k) {
      if (!slots.count(k)) {
        const auto& w = fillers[rng.below(fillers.size())];
        tokens.push_back(w);
        s.text += w;
        for (std::size_t c = 0; c < w.size(); ++c) s.pos.push_back(rng.bernoulli(0.6) ? "NN" : "VV");
        continue;
      }
      const bool held = dev && rng.bernoulli(o.held_out_rate);
      std::size_t p, x;
      if (held && rng.bernoulli(0.5)) {
        p = rng.below(o.held_out_prefixes);
        x = o.held_out_suffixes + rng.below(o.suffix_words - o.held_out_suffixes);
        if (rng.bernoulli(0.5)) x = rng.below(o.held_out_suffixes);
      } else if (held) {
        p = o.held_out_prefixes + rng.below(o.prefix_words - o.held_out_prefixes);
        x = rng.below(o.held_out_suffixes);
      } else {
        p = o.held_out_prefixes + rng.below(o.prefix_words - o.held_out_prefixes);
        x = o.held_out_suffixes + rng.below(o.suffix_words - o.held_out_suffixes);
      }
      const std::size_t start = s.text.size();
      for (const auto* w : {&out.prefixes[p], &out.suffixes[x]}) {
        tokens.push_back(*w);
        s.text += *w;
        for (std::size_t c = 0; c < w->size(); ++c) s.pos.push_back("NR");
      }
      s.entities.push_back({start, s.text.size() - 1, out.types[out.suffix_type[x]]});
    }
    s.seg = derive_soft_word_labels(tokens);
    return s;
  };
  for (std::size_t i = 0; i < o.train_sentences; ++i) out.train.push_back(make_sentence(false));
  for (std::size_t i = 0; i < o.dev_sentences; ++i) out.dev.push_back(make_sentence(true));
  return out;
}

void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw ConfigError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("train.txt");
    write_corpus(f, corpus.train, TagScheme::kBmes);
  }
  {
    auto f = open("dev.txt");
    write_corpus(f, corpus.dev, TagScheme::kBmes);
  }
  {
    auto f = open("lexicon.txt");
    for (const auto& e : corpus.lexicon) f << utf8_encode(e.word) << '\t' << e.frequency << '\n';
  }
  {
    auto f = open("lexicon.vec");
    write_embedding_file(f, corpus.embeddings);
  }
}

}  // namespace lemon
