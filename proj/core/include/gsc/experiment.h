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

#ifndef GSC_EXPERIMENT_H_
#define GSC_EXPERIMENT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"

#include "gsc/data.h"
#include "gsc/model.h"
#include "gsc/trainer.h"

namespace gsc {

inline constexpr char kSchemaVersion[] = "gscnet/1";

// Where the dataset comes from: a CSBM generator or three exported files.
struct DatasetSource {
  std::optional<CsbmParams> csbm;
  std::string preset;  // name of the CSBM preset, when one was used
  std::filesystem::path edges;
  std::filesystem::path features;
  std::filesystem::path labels;
  std::optional<int> num_classes;
};

struct SweepOptions {
  std::array<int, 2> k1_range = {0, 6};  // inclusive
  std::array<int, 2> k2_range = {0, 6};
};

struct OversmoothOptions {
  std::vector<int> depths = {2, 4, 8, 16};
  std::vector<Architecture> archs = {Architecture::kGcn, Architecture::kJkNet,
                                     Architecture::kBernNet,
                                     Architecture::kGscNet};
  // GSCNet at depth D uses K1 = K2 = D when false, and splits the D
  // propagation steps across the branches (K1 = ceil(D/2), K2 = floor(D/2))
  // when true.
  bool split_gscnet_depth = false;
};

struct AblateOptions {
  // Degree of every branch that is switched on.
  int degree = 2;
};

struct BenchOptions {
  int warmup = 5;
  int epochs = 50;
  int gscnet_k1 = 5;
  int gscnet_k2 = 5;
  int bernnet_depth = 10;
  // Basis-cache build timing at K1+K2 = s and 2s.
  int cache_total_degree = 6;
  int cache_repeats = 11;
};

struct ExperimentConfig {
  std::string name = "experiment";
  DatasetSource dataset;
  ModelShape shape;
  TrainConfig train;
  std::array<double, 3> split_ratios = {0.6, 0.2, 0.2};
  int repeats = 1;
  std::vector<std::uint64_t> seeds = {0};
  std::filesystem::path out_dir = "out";
  int threads = 1;
  SweepOptions sweep;
  OversmoothOptions oversmooth;
  AblateOptions ablate;
  BenchOptions bench;

  // Throws kConfig when seeds.size() != repeats or a field is out of range.
  void Validate() const;
};

// Missing keys keep their defaults. Unknown keys are rejected so that typos
// do not silently fall back to defaults.
ExperimentConfig ExperimentConfigFromJson(const nlohmann::json& j);
nlohmann::json ExperimentConfigToJson(const ExperimentConfig& config);
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);

// Replaces the seed list (and repeat count) from "1,2,3" or "0-9".
void ApplySeedList(ExperimentConfig& config, const std::string& spec);

Dataset MaterializeDataset(const DatasetSource& source);

struct MeanCi {
  double mean = 0.0;
  // Half width of the two-sided Student-t interval; 0 for a single sample.
  double half_width = 0.0;
  std::size_t count = 0;
};
MeanCi ComputeMeanCi(std::span<const double> samples, double level = 0.95);
nlohmann::json MeanCiToJson(const MeanCi& ci);

// Runs job(i) for i in [0, count) on up to `threads` workers.
void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& job);

// One training run per seed. Seed s fixes the split, the initialization and
// the dropout stream, so every comparison that shares a seed list is paired.
std::vector<RunRecord> RunSeeds(const Dataset& data,
                                const ExperimentConfig& config,
                                const ModelShape& shape);
std::vector<double> TestAccuracies(std::span<const RunRecord> runs);

struct TrainResult {
  std::vector<RunRecord> runs;
  MeanCi test_acc;
};
TrainResult RunTrain(const Dataset& data, const ExperimentConfig& config);

struct SweepCell {
  int k1 = 0;
  int k2 = 0;
  MeanCi test_acc;
  std::vector<double> accuracies;
};
struct SweepResult {
  std::vector<SweepCell> cells;  // k1-major
  double spread = 0.0;  // max minus min of the cell means
};
SweepResult RunSweep(const Dataset& data, const ExperimentConfig& config);

struct OversmoothRow {
  Architecture arch = Architecture::kGscNet;
  int depth = 0;
  MeanCi test_acc;
  std::vector<double> accuracies;
};
struct OversmoothResult {
  std::vector<OversmoothRow> rows;  // arch-major, depths ascending
  // Best mean accuracy over depths minus the mean at the deepest depth.
  std::vector<std::pair<Architecture, double>> drops;
};
// Shape used for `arch` at propagation depth `depth`.
ModelShape ShapeForDepth(const ModelShape& base, Architecture arch, int depth,
                         bool split_gscnet_depth);
OversmoothResult RunOversmooth(const Dataset& data,
                               const ExperimentConfig& config);

enum class ActivationVariant { kPositive, kNegative, kMixed };
std::string_view ActivationVariantName(ActivationVariant v);
struct AblateRow {
  ActivationVariant variant = ActivationVariant::kMixed;
  MeanCi test_acc;
  std::vector<double> accuracies;
};
struct AblateResult {
  std::vector<AblateRow> rows;
};
AblateResult RunAblate(const Dataset& data, const ExperimentConfig& config);

struct BenchEntry {
  std::string label;
  ModelShape shape;
  double mean_epoch_ms = 0.0;
  double total_seconds = 0.0;
  std::vector<double> epoch_ms;  // measured epochs only
};
struct CacheScaling {
  int small_degree = 0;
  int large_degree = 0;
  double small_ms = 0.0;
  double large_ms = 0.0;
  double ratio = 0.0;
};
struct BenchResult {
  std::vector<BenchEntry> entries;
  CacheScaling cache;
};
// Throws kConfig when the measurement window (epochs - warmup) is empty.
BenchResult RunBench(const Dataset& data, const ExperimentConfig& config);

// Writers. Each JSON artifact carries a "schema" field.
nlohmann::json RunRecordToJson(const RunRecord& run);
void WriteTrainOutputs(const TrainResult& result, const ExperimentConfig& config,
                       const std::filesystem::path& dir);
void WriteSweepOutputs(const SweepResult& result, const ExperimentConfig& config,
                       const std::filesystem::path& dir);
void WriteOversmoothOutputs(const OversmoothResult& result,
                            const ExperimentConfig& config,
                            const std::filesystem::path& dir);
void WriteAblateOutputs(const AblateResult& result,
                        const ExperimentConfig& config,
                        const std::filesystem::path& dir);
void WriteBenchOutputs(const BenchResult& result, const ExperimentConfig& config,
                       const std::filesystem::path& dir);

// Graph and label statistics for the `analyze` command.
nlohmann::json AnalyzeDataset(const Dataset& data);

}  // namespace gsc

#endif  // GSC_EXPERIMENT_H_
