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

#ifndef GSC_TRAINER_H_
#define GSC_TRAINER_H_

#include <cstdint>
#include <vector>

#include "gsc/data.h"
#include "gsc/model.h"
#include "gsc/poly_basis.h"

namespace gsc {

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double train_acc = 0.0;
  double val_acc = 0.0;
  double test_acc = 0.0;
  // Wall time of the optimization step (forward, backward, update).
  double epoch_ms = 0.0;
};

struct RunRecord {
  std::uint64_t seed = 0;
  // Entry 0 evaluates the untrained model; entry e follows the e-th update.
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_val_acc = 0.0;
  // Test accuracy at best_epoch.
  double test_acc = 0.0;
  double total_seconds = 0.0;
  FilterSpec learned_filter;
};

// Full-batch training on the split's train mask. The model at the epoch with
// the highest validation accuracy is selected, ties going to the lower
// validation loss and then to the earlier epoch. `config.seed` drives
// initialization and dropout.
RunRecord TrainModel(const Dataset& data, const Split& split,
                     const ModelShape& shape, const TrainConfig& config);

}  // namespace gsc

#endif  // GSC_TRAINER_H_
