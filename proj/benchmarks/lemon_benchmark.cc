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

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "lemon/encoders.h"
#include "lemon/lexicon.h"
#include "lemon/model.h"
#include "lemon/ops.h"
#include "lemon/rng.h"
#include "lemon/synthetic.h"
#include "lemon/trainer.h"

namespace {

using namespace lemon;

std::u32string random_word(Rng& rng, std::size_t length, std::size_t alphabet) {
  std::u32string w;
  for (std::size_t i = 0; i < length; ++i) {
    w.push_back(static_cast<char32_t>(0x4E00 + rng.below(alphabet)));
  }
  return w;
}

void BM_LexiconMatch(benchmark::State& state) {
  Rng rng(3);
  std::vector<std::u32string> words;
  for (int i = 0; i < state.range(0); ++i) words.push_back(random_word(rng, 2 + rng.below(4), 200));
  const Lexicon lexicon = Lexicon::build(words);
  std::vector<std::u32string> fragments;
  for (int i = 0; i < 256; ++i) fragments.push_back(random_word(rng, 1 + rng.below(10), 200));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lexicon.match(fragments[i++ % fragments.size()]));
  }
}
BENCHMARK(BM_LexiconMatch)->Arg(1000)->Arg(100000);

num::Tensor random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  num::Tensor t({r, c});
  for (double& v : t.values()) v = rng.uniform(-1.0, 1.0);
  return t;
}

void BM_FragmentEncoder(benchmark::State& state) {
  const auto kind = static_cast<FragmentEncoderKind>(state.range(0));
  const std::size_t n = 50, d = 100, h = 64;
  Rng rng(5);
  const num::Tensor t = random_matrix(rng, n, d);
  const auto spans = enumerate_fragments(n, 10);
  num::Parameter fx("fx", random_matrix(rng, d, 4 * h)), fh("fh", random_matrix(rng, h, 4 * h)),
      fb("fb", num::Tensor({4 * h}));
  num::Parameter bx("bx", random_matrix(rng, d, 4 * h)), bh("bh", random_matrix(rng, h, 4 * h)),
      bb("bb", num::Tensor({4 * h}));
  const BiLstmParameters rnn{{&fx, &fh, &fb}, {&bx, &bh, &bb}};
  for (auto _ : state) {
    num::Tape tape(false);
    num::Var x = tape.constant(t);
    num::Var f = kind == FragmentEncoderKind::kBow    ? encode_fragments_bow(x, spans)
                 : kind == FragmentEncoderKind::kFofe ? encode_fragments_fofe(x, spans, 0.5)
                                                      : encode_fragments_birnn(tape, x, spans, rnn);
    benchmark::DoNotOptimize(f.value().values().data());
  }
  state.SetLabel(to_string(kind));
}
BENCHMARK(BM_FragmentEncoder)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

struct TrainingFixture {
  SyntheticCorpus corpus;
  std::unique_ptr<Model> model;
  Dataset data;

  explicit TrainingFixture(const ModelConfig& config) {
    SyntheticOptions options;
    options.train_sentences = 16;
    options.dev_sentences = 1;
    corpus = make_synthetic_corpus(options);
    Vocabularies vocab;
    vocab.extend(corpus.train);
    Rng rng(1);
    model = std::make_unique<Model>(config, std::move(vocab), Lexicon::build(corpus.lexicon), rng);
    data = prepare_dataset(*model, encode_corpus(corpus.train, model->vocab()));
  }
};

void BM_TrainSentence(benchmark::State& state) {
  ModelConfig config;
  if (state.range(0) == 0) {
    config.char_encoder = CharEncoderKind::kBaseline;
    config.head_hidden = {64};
  }
  TrainingFixture fx(config);
  Rng rng(2);
  std::size_t i = 0;
  for (auto _ : state) {
    const std::size_t s = i++ % fx.data.size();
    num::Tape tape;
    ForwardResult r = fx.model->forward(tape, fx.data.sentences[s], fx.data.prepared[s], true, rng);
    tape.backward(fx.model->loss(tape, r, fx.data.prepared[s], true, rng));
    for (num::Parameter* p : fx.model->parameters()) p->zero_grad();
  }
  state.SetLabel(state.range(0) == 0 ? "baseline+fofe" : "default");
}
BENCHMARK(BM_TrainSentence)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
