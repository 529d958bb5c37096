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

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <functional>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gsc/data.h"
#include "gsc/error.h"
#include "gsc/experiment.h"
#include "gsc/pnca.h"
#include "gtest/gtest.h"

namespace gsc {
namespace {

using Json = nlohmann::json;

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("gsc_experiment_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected gsc::Error";
  return ErrorCode::kInvalidInput;
}

// Small, fast configuration on a 200-node homophilous CSBM.
ExperimentConfig SmallConfig() {
  ExperimentConfig c;
  c.dataset.csbm = CsbmPreset("homophily", 200, 1);
  c.dataset.preset = "homophily";
  c.shape.hidden_dim = 16;
  c.train.epochs = 20;
  c.repeats = 2;
  c.seeds = {3, 4};
  return c;
}

// Config text with a dataset block, so validation reaches the field under test.
Json WithDataset(const char* text) {
  Json j = Json::parse(text);
  j["dataset"] = {{"csbm", {{"preset", "homophily"}, {"n", 100}}}};
  return j;
}

TEST(ConfigTest, ParsesEveryBlock) {
  const Json j = Json::parse(R"({
    "schema": "gscnet/1",
    "name": "demo",
    "dataset": {"csbm": {"preset": "heterophily", "n": 300, "seed": 2}},
    "model": {"arch": "bernnet", "order": "propagate_first", "hidden": 32,
              "k1": 3, "k2": 1, "depth": 5},
    "train": {"lr_linear": 0.02, "lr_prop": 0.05, "weight_decay": 0.001,
              "dropout_conv": 0.1, "dropout_linear": 0.3, "epochs": 40,
              "patience": 7},
    "split": [0.5, 0.25, 0.25],
    "repeats": 3,
    "seeds": [7, 8, 9],
    "out_dir": "runs",
    "threads": 2,
    "sweep": {"k1": [1, 2], "k2": [0, 3]},
    "oversmooth": {"depths": [1, 3], "archs": ["gcn", "gscnet"],
                   "split_gscnet_depth": true},
    "ablate": {"degree": 4},
    "bench": {"warmup": 2, "epochs": 6}
  })");
  const ExperimentConfig c = ExperimentConfigFromJson(j);
  EXPECT_EQ(c.name, "demo");
  ASSERT_TRUE(c.dataset.csbm.has_value());
  EXPECT_EQ(c.dataset.csbm->n, 300u);
  EXPECT_EQ(c.dataset.csbm->seed, 2u);
  EXPECT_GT(c.dataset.csbm->p_inter, c.dataset.csbm->p_intra);
  EXPECT_EQ(c.shape.arch, Architecture::kBernNet);
  EXPECT_EQ(c.shape.order, PropagationOrder::kPropagateFirst);
  EXPECT_EQ(c.shape.hidden_dim, 32u);
  EXPECT_EQ(c.shape.depth, 5);
  EXPECT_EQ(c.train.lr_prop, 0.05);
  EXPECT_EQ(c.train.patience, 7);
  EXPECT_EQ(c.split_ratios[0], 0.5);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{7, 8, 9}));
  EXPECT_EQ(c.threads, 2);
  EXPECT_EQ(c.sweep.k2_range[1], 3);
  EXPECT_EQ(c.oversmooth.archs.size(), 2u);
  EXPECT_TRUE(c.oversmooth.split_gscnet_depth);
  EXPECT_EQ(c.ablate.degree, 4);
  EXPECT_EQ(c.bench.warmup, 2);

  const ExperimentConfig back =
      ExperimentConfigFromJson(ExperimentConfigToJson(c));
  EXPECT_EQ(ExperimentConfigToJson(back), ExperimentConfigToJson(c));
}

TEST(ConfigTest, SeedsDefaultToRepeatRange) {
  const ExperimentConfig c =
      ExperimentConfigFromJson(WithDataset(R"({"repeats": 4})"));
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{0, 1, 2, 3}));
}

TEST(ConfigTest, RejectsBadInput) {
  EXPECT_EQ(CodeOf([] {
              ExperimentConfigFromJson(WithDataset(R"({"epochs": 3})"));
            }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] {
              ExperimentConfigFromJson(
                  WithDataset(R"({"train": {"lr": 0.1}})"));
            }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] {
              ExperimentConfigFromJson(
                  WithDataset(R"({"repeats": 2, "seeds": [1, 2, 3]})"));
            }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] {
              ExperimentConfigFromJson(
                  WithDataset(R"({"model": {"arch": "chebnet"}})"));
            }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] {
              ExperimentConfigFromJson(WithDataset(R"({"repeats": "two"})"));
            }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] {
              ExperimentConfigFromJson(
                  WithDataset(R"({"sweep": {"k1": [0, 9]}})"));
            }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { ExperimentConfigFromJson(Json::parse("{}")); }),
            ErrorCode::kConfig);
  EXPECT_NO_THROW(ExperimentConfigFromJson(WithDataset("{}")));
}

TEST(ConfigTest, RelativeDatasetPathsResolveAgainstConfigFile) {
  TempDir dir;
  std::filesystem::create_directories(dir.path() / "cfg");
  std::ofstream(dir.path() / "cfg" / "c.json")
      << R"({"dataset": {"edges": "data/e.txt", "features": "data/f.csv",
                         "labels": "/abs/l.txt"}})";
  const ExperimentConfig c = LoadExperimentConfig(dir.path() / "cfg" / "c.json");
  EXPECT_EQ(c.dataset.edges, dir.path() / "cfg" / "data" / "e.txt");
  EXPECT_EQ(c.dataset.labels, std::filesystem::path("/abs/l.txt"));
}

TEST(ConfigTest, MissingFileIsAnError) {
  EXPECT_THROW(LoadExperimentConfig("/nonexistent/gsc/config.json"), Error);
}

TEST(SeedListTest, CommaAndRangeForms) {
  ExperimentConfig c;
  ApplySeedList(c, "4,2,9");
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{4, 2, 9}));
  EXPECT_EQ(c.repeats, 3);
  ApplySeedList(c, "0-4");
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{0, 1, 2, 3, 4}));
  ApplySeedList(c, "1,5-6");
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{1, 5, 6}));
  for (const char* bad : {"", "a", "3-1", "1,,2", "-4"}) {
    EXPECT_EQ(CodeOf([&] { ApplySeedList(c, bad); }), ErrorCode::kConfig)
        << bad;
  }
}

TEST(MeanCiTest, StudentTInterval) {
  const std::vector<double> xs = {1.0, 2.0, 3.0};
  const MeanCi ci = ComputeMeanCi(xs);
  EXPECT_EQ(ci.count, 3u);
  EXPECT_DOUBLE_EQ(ci.mean, 2.0);
  // Two degrees of freedom have a closed-form quantile.
  const double p = 0.975;
  const double t = (2 * p - 1) * std::sqrt(2.0 / (4 * p * (1 - p)));
  EXPECT_NEAR(ci.half_width, t * 1.0 / std::sqrt(3.0), 1e-9);
}

TEST(MeanCiTest, DegenerateSamples) {
  EXPECT_EQ(ComputeMeanCi(std::vector<double>{0.7}).half_width, 0.0);
  EXPECT_EQ(ComputeMeanCi(std::vector<double>{0.7}).mean, 0.7);
  EXPECT_EQ(ComputeMeanCi(std::vector<double>{0.5, 0.5, 0.5}).half_width, 0.0);
  EXPECT_EQ(ComputeMeanCi(std::vector<double>{}).count, 0u);
}

TEST(ParallelForTest, VisitsEveryIndexOnce) {
  for (int threads : {1, 3, 8}) {
    std::vector<std::atomic<int>> hits(50);
    ParallelFor(50, threads, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ParallelForTest, RethrowsWorkerError) {
  EXPECT_THROW(ParallelFor(10, 3,
                           [](std::size_t i) {
                             if (i == 6) throw std::runtime_error("boom");
                           }),
               std::runtime_error);
}

TEST(RunTrainTest, UntrainedModelIsAtChance) {
  ExperimentConfig c = SmallConfig();
  c.train.epochs = 0;
  ApplySeedList(c, "0-9");
  const TrainResult r = RunTrain(MaterializeDataset(c.dataset), c);
  ASSERT_EQ(r.runs.size(), 10u);
  EXPECT_NEAR(r.test_acc.mean, 0.5, 0.1);
  for (const RunRecord& run : r.runs) EXPECT_EQ(run.epochs.size(), 1u);
}

TEST(RunTrainTest, SameConfigSameRecords) {
  const ExperimentConfig c = SmallConfig();
  const Dataset data = MaterializeDataset(c.dataset);
  const TrainResult a = RunTrain(data, c);
  const TrainResult b = RunTrain(data, c);
  ASSERT_EQ(a.runs.size(), 2u);
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    EXPECT_EQ(a.runs[i].seed, c.seeds[i]);
    EXPECT_EQ(a.runs[i].test_acc, b.runs[i].test_acc);
    EXPECT_EQ(a.runs[i].best_epoch, b.runs[i].best_epoch);
    EXPECT_EQ(a.runs[i].learned_filter, b.runs[i].learned_filter);
    for (std::size_t e = 0; e < a.runs[i].epochs.size(); ++e) {
      EXPECT_EQ(a.runs[i].epochs[e].train_loss, b.runs[i].epochs[e].train_loss);
    }
  }
}

TEST(RunTrainTest, ThreadCountDoesNotChangeResults) {
  ExperimentConfig c = SmallConfig();
  const Dataset data = MaterializeDataset(c.dataset);
  const TrainResult serial = RunTrain(data, c);
  c.threads = 2;
  const TrainResult parallel = RunTrain(data, c);
  EXPECT_EQ(TestAccuracies(serial.runs), TestAccuracies(parallel.runs));
}

TEST(RunTrainTest, AccuraciesAndTimesAreInRange) {
  const ExperimentConfig c = SmallConfig();
  const TrainResult r = RunTrain(MaterializeDataset(c.dataset), c);
  for (const RunRecord& run : r.runs) {
    EXPECT_GE(run.total_seconds, 0.0);
    for (const EpochRecord& e : run.epochs) {
      EXPECT_GE(e.val_acc, 0.0);
      EXPECT_LE(e.val_acc, 1.0);
      EXPECT_GE(e.test_acc, 0.0);
      EXPECT_LE(e.test_acc, 1.0);
      EXPECT_GE(e.epoch_ms, 0.0);
    }
  }
}

TEST(RunSweepTest, SingleCellEqualsTrain) {
  ExperimentConfig c = SmallConfig();
  c.shape.k1 = 2;
  c.shape.k2 = 1;
  c.sweep.k1_range = {2, 2};
  c.sweep.k2_range = {1, 1};
  const Dataset data = MaterializeDataset(c.dataset);
  const SweepResult sweep = RunSweep(data, c);
  ASSERT_EQ(sweep.cells.size(), 1u);
  EXPECT_EQ(sweep.spread, 0.0);
  EXPECT_EQ(sweep.cells[0].accuracies, TestAccuracies(RunTrain(data, c).runs));
}

TEST(RunSweepTest, GridIsK1Major) {
  ExperimentConfig c = SmallConfig();
  c.train.epochs = 2;
  c.sweep.k1_range = {0, 1};
  c.sweep.k2_range = {1, 2};
  const SweepResult sweep = RunSweep(MaterializeDataset(c.dataset), c);
  ASSERT_EQ(sweep.cells.size(), 4u);
  EXPECT_EQ(sweep.cells[1].k1, 0);
  EXPECT_EQ(sweep.cells[1].k2, 2);
  EXPECT_EQ(sweep.cells[2].k1, 1);
}

TEST(OversmoothTest, DepthMapping) {
  const ModelShape base;
  ModelShape s = ShapeForDepth(base, Architecture::kGscNet, 5, false);
  EXPECT_EQ(s.k1, 5);
  EXPECT_EQ(s.k2, 5);
  s = ShapeForDepth(base, Architecture::kGscNet, 5, true);
  EXPECT_EQ(s.k1, 3);
  EXPECT_EQ(s.k2, 2);
  s = ShapeForDepth(base, Architecture::kGscNet, 1, true);
  EXPECT_EQ(s.k1, 1);
  EXPECT_EQ(s.k2, 0);
  s = ShapeForDepth(base, Architecture::kJkNet, 8, true);
  EXPECT_EQ(s.arch, Architecture::kJkNet);
  EXPECT_EQ(s.depth, 8);
}

TEST(OversmoothTest, RowsAndDrops) {
  ExperimentConfig c = SmallConfig();
  c.train.epochs = 3;
  c.oversmooth.depths = {1, 2};
  const OversmoothResult r = RunOversmooth(MaterializeDataset(c.dataset), c);
  ASSERT_EQ(r.rows.size(), 8u);
  ASSERT_EQ(r.drops.size(), 4u);
  for (const auto& [arch, drop] : r.drops) {
    double best = 0.0;
    double deepest = 0.0;
    for (const OversmoothRow& row : r.rows) {
      if (row.arch != arch) continue;
      best = std::max(best, row.test_acc.mean);
      if (row.depth == 2) deepest = row.test_acc.mean;
    }
    EXPECT_DOUBLE_EQ(drop, best - deepest);
  }
}

TEST(AblateTest, ThreeVariantsSharingSeeds) {
  ExperimentConfig c = SmallConfig();
  c.train.epochs = 3;
  const AblateResult r = RunAblate(MaterializeDataset(c.dataset), c);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].variant, ActivationVariant::kPositive);
  EXPECT_EQ(r.rows[1].variant, ActivationVariant::kNegative);
  EXPECT_EQ(r.rows[2].variant, ActivationVariant::kMixed);
  for (const AblateRow& row : r.rows) EXPECT_EQ(row.accuracies.size(), 2u);
}

TEST(BenchTest, EmptyMeasurementWindowIsAnError) {
  ExperimentConfig c = SmallConfig();
  c.bench.epochs = 1;
  c.bench.warmup = 1;
  EXPECT_EQ(CodeOf([&] { RunBench(MaterializeDataset(c.dataset), c); }),
            ErrorCode::kConfig);
}

TEST(BenchTest, ReportsMeasuredEpochsAndCacheScaling) {
  ExperimentConfig c = SmallConfig();
  c.bench.warmup = 1;
  c.bench.epochs = 4;
  c.bench.cache_repeats = 1;
  const BenchResult r = RunBench(MaterializeDataset(c.dataset), c);
  ASSERT_EQ(r.entries.size(), 2u);
  for (const BenchEntry& e : r.entries) {
    EXPECT_EQ(e.epoch_ms.size(), 3u);
    EXPECT_GT(e.mean_epoch_ms, 0.0);
  }
  EXPECT_EQ(r.cache.large_degree, 2 * r.cache.small_degree);
  EXPECT_GT(r.cache.ratio, 0.0);
}

void ExpectSchema(const std::filesystem::path& file) {
  const Json j = Json::parse(Slurp(file));
  EXPECT_EQ(j.at("schema"), kSchemaVersion) << file;
}

TEST(WritersTest, EveryJsonArtifactCarriesSchema) {
  TempDir dir;
  ExperimentConfig c = SmallConfig();
  c.train.epochs = 2;
  const Dataset data = MaterializeDataset(c.dataset);
  WriteTrainOutputs(RunTrain(data, c), c, dir.path() / "train");
  ExpectSchema(dir.path() / "train" / "summary.json");
  std::ifstream lines(dir.path() / "train" / "epochs.jsonl");
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(Json::parse(line).at("schema"), kSchemaVersion);
    ++count;
  }
  EXPECT_EQ(count, 2 * 3);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "train" / "runs.csv"));

  c.sweep.k1_range = {0, 1};
  c.sweep.k2_range = {0, 0};
  WriteSweepOutputs(RunSweep(data, c), c, dir.path() / "sweep");
  ExpectSchema(dir.path() / "sweep" / "summary.json");
  c.oversmooth.depths = {1};
  WriteOversmoothOutputs(RunOversmooth(data, c), c, dir.path() / "os");
  ExpectSchema(dir.path() / "os" / "summary.json");
  WriteAblateOutputs(RunAblate(data, c), c, dir.path() / "ablate");
  ExpectSchema(dir.path() / "ablate" / "summary.json");
  c.bench.warmup = 0;
  c.bench.epochs = 1;
  c.bench.cache_repeats = 1;
  WriteBenchOutputs(RunBench(data, c), c, dir.path() / "bench");
  ExpectSchema(dir.path() / "bench" / "summary.json");
  EXPECT_TRUE(
      std::filesystem::exists(dir.path() / "bench" / "bench_series.csv"));
}

TEST(WritersTest, RerunReproducesTimingFreeFiles) {
  TempDir dir;
  ExperimentConfig c = SmallConfig();
  c.train.epochs = 3;
  c.sweep.k1_range = {0, 1};
  c.sweep.k2_range = {1, 1};
  const Dataset data = MaterializeDataset(c.dataset);
  WriteSweepOutputs(RunSweep(data, c), c, dir.path() / "a");
  WriteSweepOutputs(RunSweep(data, c), c, dir.path() / "b");
  EXPECT_EQ(Slurp(dir.path() / "a" / "sweep.csv"),
            Slurp(dir.path() / "b" / "sweep.csv"));
  EXPECT_EQ(Slurp(dir.path() / "a" / "summary.json"),
            Slurp(dir.path() / "b" / "summary.json"));
}

TEST(AnalyzeTest, ReportsStatisticsAndClassifications) {
  Dataset data = GenerateCsbm(CsbmPreset("homophily", 60, 0));
  const Json j = AnalyzeDataset(data);
  EXPECT_EQ(j.at("schema"), kSchemaVersion);
  EXPECT_EQ(j.at("nodes"), 60);
  EXPECT_EQ(j.at("edges"), data.graph.num_undirected_edges());
  EXPECT_DOUBLE_EQ(j.at("label_smoothness").get<double>(),
                   LabelSmoothness(data.graph, data.labels));
  const Json& cls = j.at("classifications");
  EXPECT_EQ(cls.at("shifted_2I_minus_L").at("polarity"), "positive");
  EXPECT_EQ(cls.at("gcn_norm").at("polarity"), "positive");
  EXPECT_EQ(cls.at("laplacian_L").at("polarity"), "negative");
}

TEST(AnalyzeTest, EdgelessGraphHasNullSmoothness) {
  Dataset data;
  data.graph = BuildCsr({}, 3);
  data.features = FeatureMatrix(3, 1);
  data.labels = {0, 1, 0};
  data.num_classes = 2;
  EXPECT_TRUE(AnalyzeDataset(data).at("label_smoothness").is_null());
}

}  // namespace
}  // namespace gsc
