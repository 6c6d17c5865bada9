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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lemon/checkpoint.h"
#include "lemon/config.h"
#include "lemon/corpus.h"
#include "lemon/decode.h"
#include "lemon/embeddings.h"
#include "lemon/error.h"
#include "lemon/lexicon.h"
#include "lemon/model.h"
#include "lemon/rng.h"
#include "lemon/synthetic.h"
#include "lemon/trainer.h"
#include "lemon/utf8.h"

namespace fs = std::filesystem;

namespace {

using namespace lemon;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct Shared {
  std::map<std::string, std::string> model;
  std::vector<std::string> head_hidden;
  std::map<std::string, CLI::Option*> model_options;
  TrainConfig train;
  std::string scheme = "column-bmes";
  std::size_t max_sentence_length = 256;
  bool quiet = false;
};

// Applies model settings given on the command line or in a config file.
void apply_model_options(const Shared& shared, ModelConfig& config) {
  for (const auto& [key, option] : shared.model_options) {
    if (option->count() == 0) continue;
    if (key == "head_hidden") {
      std::string joined;
      for (const auto& h : shared.head_hidden) joined += (joined.empty() ? "" : ",") + h;
      config.set(key, joined);
    } else {
      config.set(key, shared.model.at(key));
    }
  }
}

ReadOptions read_options(const Shared& shared) {
  ReadOptions options;
  options.scheme = parse_tag_scheme(shared.scheme);
  options.max_sentence_length = shared.max_sentence_length;
  return options;
}

std::vector<AnnotatedSentence> load_corpus(const fs::path& path, const Shared& shared) {
  ReadReport report;
  auto corpus = read_corpus(path, read_options(shared), &report);
  if (!shared.quiet && !report.warnings.empty()) {
    std::cerr << path.string() << ": " << report.warnings.size() << " tag repairs, "
              << report.truncated_sentences << " truncated sentences\n";
  }
  return corpus;
}

void print_coverage(const char* what, const CoverageReport& c, bool quiet) {
  if (!quiet) std::cerr << c.describe(what) << '\n';
}

// train -------------------------------------------------------------------

struct TrainArgs {
  std::string train, dev, lexicon, embeddings, char_embeddings;
  std::string checkpoint, log;
};

int run_train(const Shared& shared, const TrainArgs& args) {
  ModelConfig config;
  apply_model_options(shared, config);
  config.validate();
  shared.train.validate();

  const auto train_corpus = load_corpus(args.train, shared);
  std::vector<AnnotatedSentence> dev_corpus;
  if (!args.dev.empty()) dev_corpus = load_corpus(args.dev, shared);

  Vocabularies vocab;
  vocab.extend(train_corpus);
  for (const auto& s : dev_corpus) {
    for (const auto& e : s.entities) vocab.types.add(e.type);
  }
  Lexicon lexicon = read_lexicon(args.lexicon);

  Rng rng(shared.train.seed);
  Model model(config, std::move(vocab), std::move(lexicon), rng);
  if (!args.embeddings.empty()) {
    print_coverage("lexicon", model.load_lexicon_embeddings(read_embedding_file(args.embeddings), rng),
                   shared.quiet);
  }
  if (!args.char_embeddings.empty()) {
    print_coverage("character",
                   model.load_char_embeddings(read_embedding_file(args.char_embeddings), rng),
                   shared.quiet);
  }

  const Dataset train_set = prepare_dataset(model, encode_corpus(train_corpus, model.vocab()));
  const Dataset dev_set = prepare_dataset(model, encode_corpus(dev_corpus, model.vocab()));

  const fs::path log_path = args.log.empty() ? fs::path(args.checkpoint + ".log.csv") : fs::path(args.log);
  std::ofstream log(log_path);
  if (!log) throw UsageError("cannot write " + log_path.string());
  log << epoch_csv_header() << '\n';

  TrainHooks hooks;
  hooks.on_epoch = [&](const EpochRecord& r) {
    log << to_csv(r) << '\n';
    log.flush();
    if (!shared.quiet) std::cerr << to_csv(r) << '\n';
  };
  const TrainResult result = train(model, train_set, dev_set, shared.train, hooks);
  save_checkpoint(fs::path(args.checkpoint), model);
  if (!shared.quiet) {
    std::cerr << "best epoch " << result.best_epoch << " F1 " << result.best_f1 << '\n';
  }
  return kExitOk;
}

// eval and predict --------------------------------------------------------

std::unique_ptr<Model> open_checkpoint(const Shared& shared, const std::string& path) {
  auto model = load_checkpoint(fs::path(path));
  ModelConfig requested = model->config();
  apply_model_options(shared, requested);
  model->set_training_options(requested);
  return model;
}

Dataset annotated_dataset(Model& model, const std::string& path, const Shared& shared) {
  return prepare_dataset(model, encode_corpus(load_corpus(path, shared), model.vocab()));
}

DecodeConfig decode_config(const Shared& shared) { return shared.train.decode; }

struct EvalArgs {
  std::string checkpoint, data;
};

int run_eval(const Shared& shared, const EvalArgs& args) {
  auto model = open_checkpoint(shared, args.checkpoint);
  const Dataset data = annotated_dataset(*model, args.data, shared);
  const InferenceResult result = run_inference(*model, data, decode_config(shared));
  std::cout << "sentences " << data.size() << '\n';
  std::cout << format_report(result.report, model->vocab().types);
  return kExitOk;
}

struct PredictArgs {
  std::string checkpoint, input, output, attention;
  bool raw = false;
};

Dataset raw_dataset(Model& model, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::vector<Sentence> sentences;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    sentences.push_back(encode_sentence(sentence_from_raw_text(utf8_decode(line)), model.vocab()));
  }
  return prepare_dataset(model, std::move(sentences));
}

std::string memory_label(const Model& model, const MemoryRow& row) {
  std::string label = model.buckets().name(row.bucket) + ":";
  label += row.word ? utf8_encode(model.lexicon().word(*row.word)) : "<null>";
  return label;
}

void write_attention(std::ostream& out, const Model& model, std::size_t sid,
                     const PreparedSentence& prepared, const SentencePrediction& prediction,
                     const std::vector<ScoredSpan>& resolved) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t s = 0; s < prepared.spans.size(); ++s) {
    index[{prepared.spans[s].start, prepared.spans[s].end}] = s;
  }
  char buf[64];
  for (const ScoredSpan& span : resolved) {
    const std::size_t s = index.at({span.start, span.end});
    out << sid << '\t' << span.start << '\t' << span.end << '\t'
        << model.vocab().types.symbol(span.type);
    const auto& rows = prepared.layouts[s].rows;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::snprintf(buf, sizeof buf, "%.8g", prediction.attention[prediction.memory_offsets[s] + r]);
      out << '\t' << memory_label(model, rows[r]) << '=' << buf;
    }
    out << '\n';
  }
}

int run_predict(const Shared& shared, const PredictArgs& args) {
  auto model = open_checkpoint(shared, args.checkpoint);
  const Dataset data = args.raw ? raw_dataset(*model, args.input)
                                : annotated_dataset(*model, args.input, shared);
  const bool need_outputs = !args.attention.empty();
  const InferenceResult result = run_inference(*model, data, decode_config(shared), need_outputs);

  std::ofstream file;
  if (!args.output.empty()) {
    file.open(args.output);
    if (!file) throw UsageError("cannot write " + args.output);
  }
  std::ostream& out = args.output.empty() ? std::cout : file;
  char prob[32];
  for (std::size_t i = 0; i < result.predictions.size(); ++i) {
    for (const ScoredSpan& s : result.predictions[i]) {
      std::snprintf(prob, sizeof prob, "%.6f", s.prob);
      out << i << '\t' << s.start << '\t' << s.end << '\t' << model->vocab().types.symbol(s.type)
          << '\t' << prob << '\n';
    }
  }
  if (need_outputs) {
    std::ofstream att(args.attention);
    if (!att) throw UsageError("cannot write " + args.attention);
    for (std::size_t i = 0; i < result.predictions.size(); ++i) {
      write_attention(att, *model, i, data.prepared[i], result.outputs[i], result.predictions[i]);
    }
  }
  if (!args.raw && !args.output.empty()) {
    std::cout << format_report(result.report, model->vocab().types);
  }
  return kExitOk;
}

// sweep -------------------------------------------------------------------

struct SweepArgs {
  std::vector<std::string> checkpoints;
  std::string data, output;
  std::vector<double> thresholds;
};

int run_sweep(const Shared& shared, const SweepArgs& args) {
  std::vector<double> thresholds = args.thresholds;
  if (thresholds.empty()) {
    for (int i = 0; i <= 9; ++i) thresholds.push_back(i / 10.0);
  }
  for (double rho : thresholds) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("thresholds must lie in [0, 1]");
  }
  std::ofstream file;
  if (!args.output.empty()) {
    file.open(args.output);
    if (!file) throw UsageError("cannot write " + args.output);
  }
  std::ostream& out = args.output.empty() ? std::cout : file;
  out << "gamma,rho,P,R,F1,survivors\n";
  char line[160];
  for (const std::string& path : args.checkpoints) {
    auto model = open_checkpoint(shared, path);
    const Dataset data = annotated_dataset(*model, args.data, shared);
    const auto gold = data.gold();
    const InferenceResult base = run_inference(*model, data, decode_config(shared), true);
    for (double rho : thresholds) {
      std::vector<std::vector<ScoredSpan>> predicted;
      std::size_t survivors = 0;
      for (std::size_t i = 0; i < data.size(); ++i) {
        survivors += filter_threshold(data.prepared[i].spans, base.outputs[i].probs, rho).size();
        predicted.push_back(decode(data.prepared[i].spans, base.outputs[i].probs,
                                   {rho, shared.train.decode.nested}));
      }
      const Counts c = evaluate(predicted, gold).micro;
      std::snprintf(line, sizeof line, "%g,%g,%.4f,%.4f,%.4f,%zu", model->config().gamma, rho,
                    c.precision(), c.recall(), c.f1(), survivors);
      out << line << '\n';
    }
  }
  return kExitOk;
}

// synth -------------------------------------------------------------------

int run_synth(const SyntheticOptions& options, const std::string& dir) {
  fs::create_directories(dir);
  write_synthetic_corpus(make_synthetic_corpus(options), dir);
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Lexicon-enhanced span classifier for named entity recognition"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file; command-line flags take precedence");

  Shared shared;
  for (const auto& [key, value] : ModelConfig{}.to_pairs()) {
    const std::string flag = "--" + key;
    CLI::Option* option;
    if (key == "head_hidden") {
      option = app.add_option(flag, shared.head_hidden, "hidden layer widths (default " + value + ")")
                   ->delimiter(',');
    } else {
      option = app.add_option(flag, shared.model[key], "default " + value);
    }
    option->group(ModelConfig::is_structural(key) ? "Model structure" : "Model training");
    shared.model_options[key] = option;
  }
  TrainConfig& tc = shared.train;
  const std::string g = "Training";
  app.add_option("--epochs", tc.epochs)->capture_default_str()->group(g);
  app.add_option("--batch_size", tc.batch_size)->capture_default_str()->group(g);
  app.add_option("--learning_rate,--lr", tc.learning_rate)->capture_default_str()->group(g);
  app.add_option("--weight_decay", tc.weight_decay)->capture_default_str()->group(g);
  app.add_option("--clip_norm", tc.clip_norm)->capture_default_str()->group(g);
  app.add_option("--seed", tc.seed)->capture_default_str()->group(g);
  app.add_option("--threshold", tc.decode.threshold, "decoding threshold")
      ->capture_default_str()
      ->group("Decoding");
  app.add_flag("--nested", tc.decode.nested, "keep nested entities")->group("Decoding");
  app.add_option("--scheme", shared.scheme, "column-bmes or column-bio")
      ->capture_default_str()
      ->group("Input");
  app.add_option("--max_sentence_length", shared.max_sentence_length)
      ->capture_default_str()
      ->group("Input");
  app.add_flag("-q,--quiet", shared.quiet, "no progress output on stderr");

  TrainArgs ta;
  auto* train_cmd = app.add_subcommand("train", "train a model and save the best checkpoint");
  train_cmd->fallthrough();
  train_cmd->add_option("--train", ta.train, "training corpus")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--dev", ta.dev, "development corpus")->check(CLI::ExistingFile);
  train_cmd->add_option("--lexicon", ta.lexicon, "lexicon, one word per line")
      ->required()
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--embeddings", ta.embeddings, "lexicon word vectors")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--char_embeddings", ta.char_embeddings, "character vectors")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--checkpoint", ta.checkpoint, "output checkpoint")->required();
  train_cmd->add_option("--log", ta.log, "epoch CSV (default <checkpoint>.log.csv)");

  EvalArgs ea;
  auto* eval_cmd = app.add_subcommand("eval", "report P/R/F1 of a checkpoint");
  eval_cmd->fallthrough();
  eval_cmd->add_option("--checkpoint", ea.checkpoint)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--data", ea.data, "annotated corpus")->required()->check(CLI::ExistingFile);

  PredictArgs pa;
  auto* predict_cmd = app.add_subcommand("predict", "write decoded entities");
  predict_cmd->fallthrough();
  predict_cmd->add_option("--checkpoint", pa.checkpoint)->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--input", pa.input)->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--output", pa.output, "entity list (default stdout)");
  predict_cmd->add_flag("--raw", pa.raw, "input holds one plain sentence per line");
  predict_cmd->add_option("--dump-attention", pa.attention, "per-entity attention weights");

  SweepArgs sa;
  auto* sweep_cmd = app.add_subcommand("sweep", "F1 over decoding thresholds");
  sweep_cmd->fallthrough();
  sweep_cmd->add_option("--checkpoint", sa.checkpoints, "one checkpoint per gamma")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--data", sa.data)->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--thresholds", sa.thresholds, "default 0,0.1,...,0.9")->delimiter(',');
  sweep_cmd->add_option("--output", sa.output, "CSV (default stdout)");

  SyntheticOptions so;
  std::string synth_dir;
  auto* synth_cmd = app.add_subcommand("synth", "write the synthetic benchmark corpus");
  synth_cmd->add_option("--out", synth_dir)->required();
  synth_cmd->add_option("--synth_seed", so.seed)->capture_default_str();
  synth_cmd->add_option("--train_sentences", so.train_sentences)->capture_default_str();
  synth_cmd->add_option("--dev_sentences", so.dev_sentences)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train_cmd) return run_train(shared, ta);
    if (*eval_cmd) return run_eval(shared, ea);
    if (*predict_cmd) return run_predict(shared, pa);
    if (*sweep_cmd) return run_sweep(shared, sa);
    if (*synth_cmd) return run_synth(so, synth_dir);
  } catch (const NumericError& e) {
    std::cerr << "lemon: numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ConfigError& e) {
    std::cerr << "lemon: configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "lemon: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "lemon: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "lemon: " << e.what() << '\n';
    return kExitUsage;
  } catch (const AlignmentError& e) {
    std::cerr << "lemon: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "lemon: " << e.what() << '\n';
    return 1;
  }
}
