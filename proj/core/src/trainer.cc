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

#include "lemon/trainer.h"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "lemon/adam.h"
#include "lemon/error.h"
#include "lemon/ops.h"

namespace lemon {

std::vector<std::vector<GoldSpan>> Dataset::gold() const {
  std::vector<std::vector<GoldSpan>> out;
  out.reserve(sentences.size());
  for (const Sentence& s : sentences) out.push_back(s.gold);
  return out;
}

Dataset prepare_dataset(const Model& model, std::vector<Sentence> sentences) {
  Dataset data;
  data.sentences = std::move(sentences);
  data.prepared.reserve(data.sentences.size());
  for (const Sentence& s : data.sentences) data.prepared.push_back(model.prepare(s));
  return data;
}

InferenceResult run_inference(Model& model, const Dataset& data, const DecodeConfig& decode_config,
                              bool keep_outputs) {
  InferenceResult result;
  Rng unused(0);
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    num::Tape tape(false);
    ForwardResult fwd = model.forward(tape, data.sentences[i], data.prepared[i], false, unused);
    total += model.loss(tape, fwd, data.prepared[i], false, unused).value()[0];
    SentencePrediction out;
    if (!data.prepared[i].spans.empty()) out.probs = num::softmax(fwd.logits.value());
    else out.probs = num::Tensor({0, model.num_classes()});
    result.predictions.push_back(decode(data.prepared[i].spans, out.probs, decode_config));
    if (keep_outputs) {
      out.attention = std::move(fwd.attention);
      out.memory_offsets = std::move(fwd.memory_offsets);
      result.outputs.push_back(std::move(out));
    }
  }
  result.loss = data.size() ? total / static_cast<double>(data.size()) : 0.0;
  const auto gold = data.gold();
  result.report = evaluate(result.predictions, gold);
  return result;
}

std::string epoch_csv_header() { return "epoch,split,P,R,F1,loss"; }

std::string to_csv(const EpochRecord& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu,%s,%.4f,%.4f,%.4f,%.10g", r.epoch, r.split.c_str(),
                r.counts.precision(), r.counts.recall(), r.counts.f1(), r.loss);
  return buf;
}

TrainResult train(Model& model, const Dataset& train_set, const Dataset& dev_set,
                  const TrainConfig& config, const TrainHooks& hooks) {
  config.validate();
  TrainResult result;
  Rng rng(config.seed ^ 0x6c656d6f6eULL);
  num::Adam adam({.learning_rate = config.learning_rate, .weight_decay = config.weight_decay});
  const auto& params = model.parameters();
  std::vector<num::Tensor> best;
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t batch_id = 0;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t lo = 0; lo < order.size(); lo += config.batch_size) {
      const std::size_t hi = std::min(order.size(), lo + config.batch_size);
      const double inv = 1.0 / static_cast<double>(hi - lo);
      for (num::Parameter* p : params) p->zero_grad();
      double batch_loss = 0.0;
      for (std::size_t k = lo; k < hi; ++k) {
        const std::size_t i = order[k];
        num::Tape tape;
        ForwardResult fwd =
            model.forward(tape, train_set.sentences[i], train_set.prepared[i], true, rng);
        num::Var loss = model.loss(tape, fwd, train_set.prepared[i], true, rng);
        const double value = loss.value()[0];
        if (!std::isfinite(value)) {
          throw NumericError("non-finite loss in batch " + std::to_string(batch_id) +
                             " (epoch " + std::to_string(epoch) + ", sentence " +
                             std::to_string(i) + ")");
        }
        batch_loss += value * inv;
        tape.backward(loss, inv);
      }
      num::clip_grad_norm(params, config.clip_norm);
      try {
        adam.step(params);
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " in batch " + std::to_string(batch_id));
      }
      result.step_losses.push_back(batch_loss);
      epoch_loss += batch_loss;
      ++batches;
      ++batch_id;
    }

    auto record = [&](const std::string& split, const Counts& counts, double loss) {
      result.log.push_back({epoch, split, counts, loss});
      if (hooks.on_epoch) hooks.on_epoch(result.log.back());
    };
    double selection_f1 = 0.0;
    if (!hooks.skip_train_eval || dev_set.size() == 0) {
      const auto train_eval = run_inference(model, train_set, config.decode);
      record("train", train_eval.report.micro, batches ? epoch_loss / batches : 0.0);
      selection_f1 = train_eval.report.micro.f1();
    }
    if (dev_set.size() > 0) {
      const auto dev_eval = run_inference(model, dev_set, config.decode);
      record("dev", dev_eval.report.micro, dev_eval.loss);
      selection_f1 = dev_eval.report.micro.f1();
    }
    if (selection_f1 > result.best_f1) {
      result.best_f1 = selection_f1;
      result.best_epoch = epoch;
      best.clear();
      for (num::Parameter* p : params) best.push_back(p->value());
    }
  }
  for (std::size_t k = 0; k < params.size(); ++k) params[k]->value() = best[k];
  return result;
}

}  // namespace lemon
