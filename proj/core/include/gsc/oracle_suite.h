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

#ifndef GSC_ORACLE_SUITE_H_
#define GSC_ORACLE_SUITE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "gsc/feature_matrix.h"
#include "gsc/graph.h"
#include "gsc/model.h"

namespace gsc {

struct OracleCheck {
  std::string name;
  bool passed = false;
  // Worst observed error (or failure count) against `tolerance`.
  double worst = 0.0;
  double tolerance = 0.0;
  int trials = 0;
};

struct OracleReport {
  std::uint64_t seed = 0;
  std::vector<OracleCheck> checks;

  bool passed() const;
};

// Cross-checks every sparse path against its dense oracle on random small
// instances drawn from `seed`.
OracleReport RunOracleSuite(std::uint64_t seed = 0);

// Smallest |pre-activation| of the hidden layer in eval mode. Central
// differences are only meaningful when this exceeds the step size by a wide
// margin; instances closer to the ReLU kink are redrawn by the gradient check.
double ReluMargin(const ModelParams& params, const SparseGraph& g,
                  const FeatureMatrix& x);
inline constexpr double kMinReluMargin = 1e-3;

nlohmann::json OracleReportToJson(const OracleReport& report);

}  // namespace gsc

#endif  // GSC_ORACLE_SUITE_H_
