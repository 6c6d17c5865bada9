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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.
#include <chrono>
#include <cstdarg>
#include <cstdint>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "encoder_oracles.h"
#include "grad_check.h"
#include "lemon/checkpoint.h"
#include "lemon/decode.h"
#include "lemon/encoders.h"
#include "lemon/lexicon.h"
#include "lemon/model.h"
#include "lemon/ops.h"
#include "lemon/synthetic.h"
#include "lemon/trainer.h"
#include "lexicon_oracle.h"
#include "model_fixtures.h"

namespace lemon {
namespace {

using num::Tensor;
using num::Var;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

Tensor random_matrix(Rng& rng, std::size_t r, std::size_t c, double scale) {
  Tensor t({r, c});
  for (double& v : t.values()) v = rng.uniform(-scale, scale);
  return t;
}

Tensor random_vector(Rng& rng, std::size_t n, double scale) {
  Tensor t({n});
  for (double& v : t.values()) v = rng.uniform(-scale, scale);
  return t;
}

std::u32string random_string(Rng& rng, std::size_t max_len, std::size_t alphabet) {
  std::u32string s;
  for (std::size_t i = 0, n = 1 + rng.below(max_len); i < n; ++i) {
    s.push_back(static_cast<char32_t>(U'a' + rng.below(alphabet)));
  }
  return s;
}

double max_diff(const Tensor& t, std::size_t row, const std::vector<double>& want) {
  double worst = 0.0;
  for (std::size_t c = 0; c < want.size(); ++c) worst = std::max(worst, std::abs(t.at(row, c) - want[c]));
  return worst;
}

// Fragment-count law -------------------------------------------------------

Outcome fragment_count_law() {
  std::size_t pairs = 0, bad = 0;
  for (std::size_t n = 1; n <= 50; ++n) {
    for (std::size_t m = 1; m <= n; ++m) {
      ++pairs;
      const std::size_t want = m * (2 * n - m + 1) / 2;
      if (enumerate_fragments(n, m).size() != want || fragment_count(n, m) != want) ++bad;
    }
  }
  return {bad == 0, format("%zu (m, N) pairs, %zu mismatches", pairs, bad)};
}

// Matching oracle -----------------------------------------------------------

Outcome matching_oracle() {
  Rng rng(2024);
  std::size_t mismatches = 0, matches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::u32string> words;
    for (std::size_t i = 0, n = 1 + rng.below(50); i < n; ++i) words.push_back(random_string(rng, 6, 5));
    const Lexicon lexicon = Lexicon::build(words);
    const std::u32string fragment = random_string(rng, 10, 5);
    const auto got = lexicon.match(fragment);
    matches += got.size();
    if (got != testing::brute_force_match(lexicon, fragment)) ++mismatches;
  }
  return {mismatches == 0, format("1000 cases, %zu matches, %zu mismatches", matches, mismatches)};
}

// Incremental encoders -------------------------------------------------------

Outcome incremental_encoders() {
  double fofe_worst = 0.0, birnn_worst = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const std::size_t n = 1 + rng.below(20), m = 1 + rng.below(10), d = 1 + rng.below(6);
    const double alpha = rng.uniform(0.05, 0.95);
    const Tensor t = random_matrix(rng, n, d, 3.0);
    const auto spans = enumerate_fragments(n, m);
    num::Tape tape(false);
    const Tensor f = encode_fragments_fofe(tape.constant(t), spans, alpha).value();
    for (std::size_t s = 0; s < spans.size(); ++s) {
      fofe_worst = std::max(
          fofe_worst, max_diff(f, s, testing::direct_fofe(t, spans[s].start, spans[s].end, alpha)));
    }

    const std::size_t h = 1 + rng.below(5);
    num::Parameter fx("fx", random_matrix(rng, d, 4 * h, 0.8)),
        fh("fh", random_matrix(rng, h, 4 * h, 0.8)), fb("fb", random_vector(rng, 4 * h, 0.8));
    num::Parameter bx("bx", random_matrix(rng, d, 4 * h, 0.8)),
        bh("bh", random_matrix(rng, h, 4 * h, 0.8)), bb("bb", random_vector(rng, 4 * h, 0.8));
    const Tensor r = encode_fragments_birnn(tape, tape.constant(t), spans,
                                            {{&fx, &fh, &fb}, {&bx, &bh, &bb}})
                         .value();
    for (std::size_t s = 0; s < spans.size(); ++s) {
      std::vector<std::size_t> fwd;
      for (std::size_t k = spans[s].start; k <= spans[s].end; ++k) fwd.push_back(k);
      const std::vector<std::size_t> bwd(fwd.rbegin(), fwd.rend());
      auto want = testing::direct_lstm(t, fwd, fx.value(), fh.value(), fb.value());
      const auto back = testing::direct_lstm(t, bwd, bx.value(), bh.value(), bb.value());
      want.insert(want.end(), back.begin(), back.end());
      birnn_worst = std::max(birnn_worst, max_diff(r, s, want));
    }
  }
  return {fofe_worst <= 1e-10 && birnn_worst <= 1e-8,
          format("200 seeds, max |diff| FOFE %.2e, Bi-RNN %.2e", fofe_worst, birnn_worst)};
}

// Gradient audit ---------------------------------------------------------------

Outcome gradient_audit() {
  ModelConfig fofe = testing::tiny_config();
  ModelConfig bow = fofe;
  bow.fragment_encoder = FragmentEncoderKind::kBow;
  bow.loss = LossKind::kCrossEntropy;
  ModelConfig rnn = fofe;
  rnn.char_encoder = CharEncoderKind::kBiRnn;
  rnn.char_hidden = 2;
  rnn.fragment_encoder = FragmentEncoderKind::kBiRnn;
  rnn.fragment_hidden = 2;
  rnn.gamma = 1.5;

  double worst = 0.0;
  std::string worst_entry;
  std::size_t groups = 0, entries = 0;
  for (ModelConfig config : {fofe, bow, rnn}) {
    config.freeze_lexicon = false;
    auto setup = testing::micro_setup(config);
    Model& model = *setup.model;
    auto loss = [&](num::Tape& tape) {
      Rng unused(0);
      std::vector<Var> parts;
      for (std::size_t i = 0; i < setup.data.size(); ++i) {
        auto fwd = model.forward(tape, setup.data.sentences[i], setup.data.prepared[i], false, unused);
        parts.push_back(model.loss(tape, fwd, setup.data.prepared[i], false, unused));
      }
      return num::sum(num::concat(parts));
    };
    const auto report = testing::check_gradients(model.parameters(), loss, 1e-5);
    groups += model.parameters().size();
    entries += report.entries_checked;
    if (report.max_rel_error > worst) {
      worst = report.max_rel_error;
      worst_entry = report.worst;
    }
  }
  return {worst < 1e-4, format("%zu parameter groups in 3 configurations, %zu entries, max rel err %.2e%s%s",
                               groups, entries, worst, worst_entry.empty() ? "" : " at ",
                               worst_entry.c_str())};
}

// Synthetic corpus helpers ---------------------------------------------------------

struct SyntheticRun {
  std::unique_ptr<Model> model;
  Dataset train_set;
  Dataset dev_set;
};

SyntheticRun synthetic_run(const SyntheticCorpus& corpus, const ModelConfig& config,
                           std::uint64_t seed) {
  Vocabularies vocab;
  vocab.extend(corpus.train);
  for (const auto& type : corpus.types) vocab.types.add(type);
  Rng rng(seed);
  SyntheticRun run;
  run.model = std::make_unique<Model>(config, std::move(vocab), Lexicon::build(corpus.lexicon), rng);
  run.model->load_lexicon_embeddings(corpus.embeddings, rng);
  run.train_set = prepare_dataset(*run.model, encode_corpus(corpus.train, run.model->vocab()));
  run.dev_set = prepare_dataset(*run.model, encode_corpus(corpus.dev, run.model->vocab()));
  return run;
}

ModelConfig desk_config() {
  ModelConfig c;
  c.char_encoder = CharEncoderKind::kBaseline;
  c.fragment_encoder = FragmentEncoderKind::kFofe;
  c.head_hidden = {64};
  c.max_span = 6;
  c.dropout = 0.0;
  return c;
}

// Focal-loss reduction ---------------------------------------------------------------

Outcome focal_reduction() {
  SyntheticOptions options;
  options.train_sentences = 200;
  const SyntheticCorpus corpus = make_synthetic_corpus(options);
  ModelConfig focal = desk_config();
  focal.head_hidden = {16};
  focal.dropout = 0.3;
  focal.gamma = 0.0;
  focal.learn_alpha = false;
  ModelConfig ce = focal;
  ce.loss = LossKind::kCrossEntropy;
  auto a = synthetic_run(corpus, focal, 5);
  auto b = synthetic_run(corpus, ce, 5);
  TrainConfig tc;
  tc.epochs = 1;
  TrainHooks hooks;
  hooks.skip_train_eval = true;
  const auto ra = train(*a.model, a.train_set, {}, tc, hooks);
  const auto rb = train(*b.model, b.train_set, {}, tc, hooks);
  double worst = ra.step_losses.size() == rb.step_losses.size() ? 0.0 : INFINITY;
  for (std::size_t k = 0; k < std::min(ra.step_losses.size(), rb.step_losses.size()); ++k) {
    worst = std::max(worst, std::abs(ra.step_losses[k] - rb.step_losses[k]));
  }
  return {worst <= 1e-9 && !ra.step_losses.empty(),
          format("%zu steps over one epoch, max |focal - CE| %.2e", ra.step_losses.size(), worst)};
}

// Decoder safety -----------------------------------------------------------------------

Outcome decoder_safety() {
  Rng rng(77);
  std::size_t flat_bad = 0, nested_bad = 0, kept = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<ScoredSpan> candidates;
    const std::size_t n = 1 + rng.below(20);
    for (std::size_t k = 0, count = rng.below(15); k < count; ++k) {
      const std::size_t start = rng.below(n);
      const std::size_t end = start + rng.below(std::min<std::size_t>(6, n - start));
      candidates.push_back({start, end, 1 + rng.below(3), static_cast<double>(rng.below(10)) / 10.0});
    }
    const auto flat = resolve(candidates, false);
    const auto nested = resolve(candidates, true);
    kept += flat.size() + nested.size();
    for (std::size_t i = 0; i < flat.size(); ++i)
      for (std::size_t j = i + 1; j < flat.size(); ++j) flat_bad += flat[i].overlaps(flat[j]);
    for (std::size_t i = 0; i < nested.size(); ++i)
      for (std::size_t j = i + 1; j < nested.size(); ++j) {
        const auto& x = nested[i];
        const auto& y = nested[j];
        nested_bad += x.overlaps(y) && !x.contains(y) && !y.contains(x);
      }
  }
  return {flat_bad == 0 && nested_bad == 0,
          format("10000 sets, %zu spans kept, %zu flat overlaps, %zu nested crossings", kept,
                 flat_bad, nested_bad)};
}

// Overfit benchmark and threshold monotonicity -------------------------------------------

std::unique_ptr<Model> overfit_model;

Outcome overfit_benchmark() {
  const SyntheticCorpus corpus = make_synthetic_corpus({});
  auto run = synthetic_run(corpus, desk_config(), 1);
  TrainConfig tc;
  tc.epochs = 50;
  std::size_t first = 0;
  double best = 0.0;
  TrainHooks hooks;
  hooks.on_epoch = [&](const EpochRecord& r) {
    if (r.split != "train") return;
    best = std::max(best, r.counts.f1());
    if (first == 0 && r.counts.f1() >= 99.0) first = r.epoch;
  };
  train(*run.model, run.train_set, {}, tc, hooks);
  const double final_f1 = run_inference(*run.model, run.train_set, tc.decode).report.micro.f1();
  overfit_model = std::move(run.model);
  return {final_f1 >= 99.0,
          format("%zu sentences, %zu lexicon words, train F1 %.2f (first >= 99 at epoch %zu)",
                 corpus.train.size(), corpus.lexicon.size(), final_f1, first)};
}

Outcome threshold_monotonicity() {
  const SyntheticCorpus corpus = make_synthetic_corpus({});
  std::vector<std::unique_ptr<Model>> models;
  if (overfit_model) {
    std::stringstream buffer;
    save_checkpoint(buffer, *overfit_model);
    models.push_back(load_checkpoint(buffer));
  }
  {
    auto fresh = synthetic_run(corpus, desk_config(), 9);
    std::stringstream buffer;
    save_checkpoint(buffer, *fresh.model);
    models.push_back(load_checkpoint(buffer));
  }
  std::size_t violations = 0;
  std::string counts;
  for (auto& model : models) {
    const Dataset dev = prepare_dataset(*model, encode_corpus(corpus.dev, model->vocab()));
    const auto outputs = run_inference(*model, dev, {}, true).outputs;
    std::size_t previous = SIZE_MAX;
    counts += counts.empty() ? "" : "; ";
    for (int step = 0; step <= 9; ++step) {
      std::size_t survivors = 0;
      for (std::size_t i = 0; i < dev.size(); ++i) {
        survivors += filter_threshold(dev.prepared[i].spans, outputs[i].probs, step / 10.0).size();
      }
      violations += survivors > previous;
      previous = survivors;
      counts += (step ? "," : "") + std::to_string(survivors);
    }
  }
  return {violations == 0 && models.size() == 2,
          format("%zu checkpoints, survivors over rho 0.0..0.9: %s", models.size(), counts.c_str())};
}

// Ablation direction ---------------------------------------------------------------------

Outcome ablation_direction() {
  constexpr int kSeeds = 5;
  const SyntheticCorpus corpus = make_synthetic_corpus({});
  TrainConfig tc;
  tc.epochs = 20;
  TrainHooks hooks;
  hooks.skip_train_eval = true;
  std::string detail;
  int wins = 0;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    tc.seed = static_cast<std::uint64_t>(seed);
    double f1[2];
    for (int lex = 0; lex < 2; ++lex) {
      ModelConfig c = desk_config();
      c.use_lexicon = lex == 1;
      auto run = synthetic_run(corpus, c, tc.seed);
      f1[lex] = train(*run.model, run.train_set, run.dev_set, tc, hooks).best_f1;
    }
    wins += f1[0] < f1[1];
    detail += format("%sseed %d: %.2f < %.2f", seed == 1 ? "" : ", ", seed, f1[0], f1[1]);
  }
  return {wins == kSeeds, format("dev F1 without vs with lexicon, %s", detail.c_str())};
}

// Determinism ------------------------------------------------------------------------------

Outcome determinism() {
  SyntheticOptions options;
  options.train_sentences = 60;
  options.dev_sentences = 20;
  const SyntheticCorpus corpus = make_synthetic_corpus(options);
  ModelConfig c = desk_config();
  c.dropout = 0.3;
  c.none_keep = 0.5;
  TrainConfig tc;
  tc.epochs = 3;
  tc.seed = 11;
  std::string checkpoint[2], log[2];
  for (int i = 0; i < 2; ++i) {
    auto run = synthetic_run(corpus, c, tc.seed);
    TrainHooks hooks;
    hooks.on_epoch = [&](const EpochRecord& r) { log[i] += to_csv(r) + "\n"; };
    train(*run.model, run.train_set, run.dev_set, tc, hooks);
    std::ostringstream out;
    save_checkpoint(out, *run.model);
    checkpoint[i] = out.str();
  }
  const bool same = checkpoint[0] == checkpoint[1] && log[0] == log[1] && !log[0].empty();
  return {same, format("checkpoints %zu bytes %s, logs %s", checkpoint[0].size(),
                       checkpoint[0] == checkpoint[1] ? "identical" : "differ",
                       log[0] == log[1] ? "identical" : "differ")};
}

struct Criterion {
  const char* id;
  const char* name;
  double limit_seconds;  // 0 for no limit
  std::function<Outcome()> check;
};

}  // namespace
}  // namespace lemon

int main() {
  using namespace lemon;
  const Criterion criteria[] = {
      {"AC1", "fragment-count law", 1.0, fragment_count_law},
      {"AC2", "matching oracle equivalence", 5.0, matching_oracle},
      {"AC3", "incremental encoder equivalence", 30.0, incremental_encoders},
      {"AC4", "end-to-end gradient audit", 60.0, gradient_audit},
      {"AC5", "focal loss reduces to cross-entropy", 0.0, focal_reduction},
      {"AC6", "decoder safety", 0.0, decoder_safety},
      {"AC7", "synthetic overfit benchmark", 300.0, overfit_benchmark},
      {"AC8", "lexicon ablation direction", 0.0, ablation_direction},
      {"AC9", "threshold monotonicity", 0.0, threshold_monotonicity},
      {"AC10", "determinism", 0.0, determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = outcome.pass;
    if (c.limit_seconds > 0 && seconds >= c.limit_seconds) {
      pass = false;
      outcome.detail += format("; over the %.0f s budget", c.limit_seconds);
    }
    failures += !pass;
    std::printf("%-4s %s  %s: %s [%.2f s]\n", c.id, pass ? "PASS" : "FAIL", c.name,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
