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

#ifndef GSC_DATA_H_
#define GSC_DATA_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"

#include "gsc/feature_matrix.h"
#include "gsc/graph.h"

namespace gsc {

struct Dataset {
  SparseGraph graph;
  FeatureMatrix features;
  std::vector<int> labels;
  int num_classes = 0;

  // Throws kInvalidInput when labels or feature rows disagree with the graph.
  void Validate() const;
};

struct Split {
  NodeMask train;
  NodeMask val;
  NodeMask test;

  std::size_t train_size() const;
  std::size_t val_size() const;
  std::size_t test_size() const;
};

// Shuffles nodes with `seed`; val and test get floor(ratio * n) nodes and
// train takes the rest.
Split RandomSplit(std::size_t n, std::array<double, 3> ratios, std::uint64_t seed);
inline Split RandomSplit(std::size_t n, std::uint64_t seed) {
  return RandomSplit(n, {0.6, 0.2, 0.2}, seed);
}

// Two-class contextual stochastic block model. Classes have n/2 nodes each;
// every intra-class pair is joined with probability p_intra and every
// inter-class pair with p_inter. Node features are mu * (+/-u) + sigma * noise
// with u a random unit vector drawn from the seed.
struct CsbmParams {
  std::size_t n = 1000;
  double p_intra = 0.016;
  double p_inter = 0.004;
  double mu = 1.0;
  double sigma = 1.0;
  std::size_t d = 16;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Probabilities giving `expected_degree` with p_intra / p_inter = ratio.
CsbmParams CsbmForDegree(std::size_t n, double expected_degree, double ratio,
                         std::uint64_t seed);
// "homophily" (ratio 4) or "heterophily" (ratio 1/4), expected degree 10,
// d = 16, mu = sigma = 1. Throws kConfig for other names.
CsbmParams CsbmPreset(const std::string& name, std::size_t n = 1000,
                      std::uint64_t seed = 0);

Dataset GenerateCsbm(const CsbmParams& params);

nlohmann::json CsbmParamsToJson(const CsbmParams& params);
CsbmParams CsbmParamsFromJson(const nlohmann::json& j);

// Plain comma-separated floats, one row per node.
FeatureMatrix ParseFeatureCsv(std::istream& in);
void WriteFeatureCsv(const FeatureMatrix& x, std::ostream& out);
// One integer per line. With `num_classes`, labels outside
// [0, num_classes) are rejected; otherwise only negatives are.
std::vector<int> ParseLabels(std::istream& in,
                             std::optional<int> num_classes = std::nullopt);
void WriteLabels(std::span<const int> labels, std::ostream& out);

// Reads the edge list, feature CSV and label file. Errors carry the line
// number of the offending input.
Dataset LoadDataset(const std::filesystem::path& edge_path,
                    const std::filesystem::path& feature_path,
                    const std::filesystem::path& label_path,
                    std::optional<int> num_classes = std::nullopt);
void SaveDataset(const Dataset& data, const std::filesystem::path& edge_path,
                 const std::filesystem::path& feature_path,
                 const std::filesystem::path& label_path);

struct DatasetStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;  // undirected, non-loop, counted once
  std::size_t features = 0;
  int classes = 0;
  std::size_t components = 0;
  std::size_t isolated = 0;
};
DatasetStats Describe(const Dataset& data);

}  // namespace gsc

#endif  // GSC_DATA_H_
