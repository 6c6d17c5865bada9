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

#ifndef LEMON_TRAINER_H_
#define LEMON_TRAINER_H_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "lemon/config.h"
#include "lemon/decode.h"
#include "lemon/model.h"

namespace lemon {

struct Dataset {
  std::vector<Sentence> sentences;
  std::vector<PreparedSentence> prepared;
  std::size_t size() const { return sentences.size(); }
  std::vector<std::vector<GoldSpan>> gold() const;
};

Dataset prepare_dataset(const Model& model, std::vector<Sentence> sentences);

struct InferenceResult {
  std::vector<std::vector<ScoredSpan>> predictions;
  std::vector<SentencePrediction> outputs;  // kept only when requested
  EvaluationReport report;
  double loss = 0.0;  // mean per-sentence loss
};

InferenceResult run_inference(Model& model, const Dataset& data, const DecodeConfig& decode,
                              bool keep_outputs = false);

struct EpochRecord {
  std::size_t epoch = 0;
  std::string split;
  Counts counts;
  double loss = 0.0;
};

std::string epoch_csv_header();
std::string to_csv(const EpochRecord& record);

struct TrainResult {
  std::vector<EpochRecord> log;
  std::vector<double> step_losses;  // mean loss of each minibatch
  std::size_t best_epoch = 0;
  double best_f1 = -1.0;
};

struct TrainHooks {
  std::function<void(const EpochRecord&)> on_epoch;
  // Skips the per-epoch evaluation of the training split.
  bool skip_train_eval = false;
};

// Minibatch Adam over shuffled sentences. The per-batch objective is the mean
// over its sentences of each sentence's summed span loss. After every epoch
// the splits are decoded and scored; the parameters of the epoch with the best
// dev F1 (train F1 when there is no dev data) are restored at the end. Throws
// NumericError naming the batch when the loss or a gradient is not finite.
TrainResult train(Model& model, const Dataset& train_set, const Dataset& dev_set,
                  const TrainConfig& config, const TrainHooks& hooks = {});

}  // namespace lemon

#endif  // LEMON_TRAINER_H_
