// Copyright 2026 The gscnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gsc/trainer.h"

#include <chrono>

#include "gsc/error.h"

namespace gsc {
namespace {

using Clock = std::chrono::steady_clock;

void Evaluate(const ModelParams& params, const Dataset& data,
              const Split& split, const TrainConfig& config, Rng& rng,
              EpochRecord& record) {
  const FeatureMatrix logits =
      Forward(params, data.graph, data.features, ForwardMode::kEval, config, rng)
          .logits;
  const std::vector<int> pred = Predict(logits);
  if (record.epoch == 0) {
    record.train_loss = CrossEntropy(logits, data.labels, split.train);
  }
  record.val_loss = CrossEntropy(logits, data.labels, split.val);
  record.train_acc = Accuracy(pred, data.labels, split.train);
  record.val_acc = Accuracy(pred, data.labels, split.val);
  record.test_acc = Accuracy(pred, data.labels, split.test);
}

}  // namespace

RunRecord TrainModel(const Dataset& data, const Split& split,
                     const ModelShape& shape, const TrainConfig& config) {
  config.Validate();
  data.Validate();
  const std::size_t n = data.graph.num_nodes();
  if (split.train.size() != n || split.val.size() != n ||
      split.test.size() != n) {
    throw Error(ErrorCode::kInvalidInput, "split masks do not match node count");
  }
  if (split.train_size() == 0) {
    throw Error(ErrorCode::kInvalidInput, "empty training mask");
  }

  const auto start = Clock::now();
  ModelParams params = InitParams(shape, config.seed);
  AdamState adam = AdamState::For(params);
  // Dropout draws come from a stream separate from initialization.
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  RunRecord run;
  run.seed = config.seed;
  run.epochs.reserve(static_cast<std::size_t>(config.epochs) + 1);

  EpochRecord initial;
  Evaluate(params, data, split, config, rng, initial);
  run.epochs.push_back(initial);
  run.best_val_acc = initial.val_acc;
  run.test_acc = initial.test_acc;
  run.learned_filter = params.filter;
  double best_val_loss = initial.val_loss;
  double patience_ref = initial.val_acc;
  int since_best = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    const auto step_start = Clock::now();
    const LossAndGradient lg = ComputeLossAndGrad(
        params, data.graph, data.features, data.labels, split.train, config,
        rng);
    AdamStep(params, lg.grads, adam, config);
    rec.epoch_ms = std::chrono::duration<double, std::milli>(Clock::now() -
                                                             step_start)
                       .count();
    rec.train_loss = lg.loss;
    Evaluate(params, data, split, config, rng, rec);
    run.epochs.push_back(rec);

    if (rec.val_acc > run.best_val_acc ||
        (rec.val_acc == run.best_val_acc && rec.val_loss < best_val_loss)) {
      run.best_epoch = epoch;
      run.best_val_acc = rec.val_acc;
      run.test_acc = rec.test_acc;
      run.learned_filter = params.filter;
      best_val_loss = rec.val_loss;
    }
    // Patience counts epochs without a strict accuracy gain.
    if (rec.val_acc > patience_ref) {
      patience_ref = rec.val_acc;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  run.total_seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  return run;
}

}  // namespace gsc
