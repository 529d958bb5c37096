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

// Command-line driver: training, sweeps, ablations, timing, data generation,
// dataset analysis and the oracle suite.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gsc/data.h"
#include "gsc/error.h"
#include "gsc/experiment.h"
#include "gsc/oracle_suite.h"
#include "gsc/pnca.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitVerify = 4;

struct GlobalOptions {
  std::string config;
  std::string seed_list;
  std::string out_dir;
  int threads = 0;
};

gsc::ExperimentConfig ResolveConfig(const GlobalOptions& opts) {
  gsc::ExperimentConfig config;
  if (!opts.config.empty()) {
    config = gsc::LoadExperimentConfig(opts.config);
  } else {
    config.dataset.csbm = gsc::CsbmPreset("homophily");
    config.dataset.preset = "homophily";
  }
  if (!opts.seed_list.empty()) gsc::ApplySeedList(config, opts.seed_list);
  if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
  if (opts.threads > 0) config.threads = opts.threads;
  config.Validate();
  return config;
}

void PrintCi(const std::string& label, const gsc::MeanCi& ci) {
  std::printf("%-24s %.4f +- %.4f (n=%zu)\n", label.c_str(), ci.mean,
              ci.half_width, ci.count);
}

int RunTrain(const GlobalOptions& opts) {
  const gsc::ExperimentConfig config = ResolveConfig(opts);
  const gsc::Dataset data = gsc::MaterializeDataset(config.dataset);
  const gsc::TrainResult result = gsc::RunTrain(data, config);
  gsc::WriteTrainOutputs(result, config, config.out_dir);
  for (const gsc::RunRecord& run : result.runs) {
    std::printf("seed %llu: best epoch %d, val %.4f, test %.4f, %.2fs\n",
                static_cast<unsigned long long>(run.seed), run.best_epoch,
                run.best_val_acc, run.test_acc, run.total_seconds);
  }
  PrintCi("test accuracy", result.test_acc);
  return kExitOk;
}

int RunSweep(const GlobalOptions& opts) {
  const gsc::ExperimentConfig config = ResolveConfig(opts);
  const gsc::Dataset data = gsc::MaterializeDataset(config.dataset);
  const gsc::SweepResult result = gsc::RunSweep(data, config);
  gsc::WriteSweepOutputs(result, config, config.out_dir);
  for (const gsc::SweepCell& cell : result.cells) {
    PrintCi("K1=" + std::to_string(cell.k1) + " K2=" + std::to_string(cell.k2),
            cell.test_acc);
  }
  std::printf("spread %.4f\n", result.spread);
  return kExitOk;
}

int RunOversmooth(const GlobalOptions& opts) {
  const gsc::ExperimentConfig config = ResolveConfig(opts);
  const gsc::Dataset data = gsc::MaterializeDataset(config.dataset);
  const gsc::OversmoothResult result = gsc::RunOversmooth(data, config);
  gsc::WriteOversmoothOutputs(result, config, config.out_dir);
  for (const gsc::OversmoothRow& row : result.rows) {
    PrintCi(std::string(gsc::ArchitectureName(row.arch)) + " depth " +
                std::to_string(row.depth),
            row.test_acc);
  }
  for (const auto& [arch, drop] : result.drops) {
    std::printf("%s drop %.4f\n", std::string(gsc::ArchitectureName(arch)).c_str(),
                drop);
  }
  return kExitOk;
}

int RunAblate(const GlobalOptions& opts) {
  const gsc::ExperimentConfig config = ResolveConfig(opts);
  const gsc::Dataset data = gsc::MaterializeDataset(config.dataset);
  const gsc::AblateResult result = gsc::RunAblate(data, config);
  gsc::WriteAblateOutputs(result, config, config.out_dir);
  for (const gsc::AblateRow& row : result.rows) {
    PrintCi(std::string(gsc::ActivationVariantName(row.variant)), row.test_acc);
  }
  return kExitOk;
}

int RunBench(const GlobalOptions& opts) {
  const gsc::ExperimentConfig config = ResolveConfig(opts);
  const gsc::Dataset data = gsc::MaterializeDataset(config.dataset);
  const gsc::BenchResult result = gsc::RunBench(data, config);
  gsc::WriteBenchOutputs(result, config, config.out_dir);
  for (const gsc::BenchEntry& e : result.entries) {
    std::printf("%-8s %.3f ms/epoch, %.3f s total\n", e.label.c_str(),
                e.mean_epoch_ms, e.total_seconds);
  }
  std::printf("basis cache K=%d: %.3f ms, K=%d: %.3f ms, ratio %.3f\n",
              result.cache.small_degree, result.cache.small_ms,
              result.cache.large_degree, result.cache.large_ms,
              result.cache.ratio);
  return kExitOk;
}

struct CsbmOptions {
  std::string preset = "homophily";
  std::optional<std::size_t> n;
  std::optional<double> p_intra;
  std::optional<double> p_inter;
  std::optional<double> mu;
  std::optional<double> sigma;
  std::optional<std::size_t> d;
  std::uint64_t seed = 0;
};

int RunCsbmGen(const GlobalOptions& opts, const CsbmOptions& c) {
  gsc::CsbmParams params =
      gsc::CsbmPreset(c.preset, c.n.value_or(1000), c.seed);
  if (c.p_intra) params.p_intra = *c.p_intra;
  if (c.p_inter) params.p_inter = *c.p_inter;
  if (c.mu) params.mu = *c.mu;
  if (c.sigma) params.sigma = *c.sigma;
  if (c.d) params.d = *c.d;
  const gsc::Dataset data = gsc::GenerateCsbm(params);
  const std::filesystem::path dir = opts.out_dir.empty() ? "." : opts.out_dir;
  std::filesystem::create_directories(dir);
  gsc::SaveDataset(data, dir / "edges.txt", dir / "features.csv",
                   dir / "labels.txt");
  const gsc::DatasetStats stats = gsc::Describe(data);
  nlohmann::json sidecar = {
      {"schema", gsc::kSchemaVersion},
      {"params", gsc::CsbmParamsToJson(params)},
      {"preset", c.preset},
      {"edges", stats.edges},
      {"label_smoothness", stats.edges > 0 ? nlohmann::json(gsc::LabelSmoothness(
                                                 data.graph, data.labels))
                                           : nlohmann::json(nullptr)}};
  std::ofstream out(dir / "csbm.json");
  out << sidecar.dump(2) << '\n';
  std::cout << sidecar.dump(2) << '\n';
  return kExitOk;
}

struct AnalyzeOptions {
  std::string edges;
  std::string features;
  std::string labels;
  std::optional<int> num_classes;
};

int RunAnalyze(const GlobalOptions& opts, const AnalyzeOptions& a) {
  gsc::Dataset data;
  if (!a.edges.empty() || !a.features.empty() || !a.labels.empty()) {
    if (a.edges.empty() || a.features.empty() || a.labels.empty()) {
      throw gsc::Error(gsc::ErrorCode::kConfig,
                       "analyze needs --edges, --features and --labels together");
    }
    data = gsc::LoadDataset(a.edges, a.features, a.labels, a.num_classes);
  } else {
    data = gsc::MaterializeDataset(ResolveConfig(opts).dataset);
  }
  const nlohmann::json report = gsc::AnalyzeDataset(data);
  if (!opts.out_dir.empty()) {
    std::filesystem::create_directories(opts.out_dir);
    std::ofstream out(std::filesystem::path(opts.out_dir) / "analyze.json");
    out << report.dump(2) << '\n';
  }
  std::cout << report.dump(2) << '\n';
  return kExitOk;
}

int RunVerify(const GlobalOptions& opts, std::uint64_t seed) {
  const gsc::OracleReport report = gsc::RunOracleSuite(seed);
  const nlohmann::json j = gsc::OracleReportToJson(report);
  if (!opts.out_dir.empty()) {
    std::filesystem::create_directories(opts.out_dir);
    std::ofstream out(std::filesystem::path(opts.out_dir) / "verify.json");
    out << j.dump(2) << '\n';
  }
  std::cout << j.dump(2) << '\n';
  return report.passed() ? kExitOk : kExitVerify;
}

int ExitCodeFor(gsc::ErrorCode code) {
  switch (code) {
    case gsc::ErrorCode::kConfig:
      return kExitConfig;
    default:
      return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse spectral graph filters: training and analysis driver"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--config", global.config, "Experiment config (JSON)");
  app.add_option("--seed-list", global.seed_list,
                 "Seeds, e.g. '0-9' or '1,5,7'; replaces the config's list");
  app.add_option("--out-dir", global.out_dir, "Output directory");
  app.add_option("--threads", global.threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  auto* train = app.add_subcommand("train", "Train one model per seed");
  auto* sweep = app.add_subcommand("sweep", "Grid over GSCNet degrees (K1, K2)");
  auto* oversmooth =
      app.add_subcommand("oversmooth", "Accuracy versus propagation depth");
  auto* ablate = app.add_subcommand(
      "ablate", "Positive-only, negative-only and mixed GSCNet bases");
  auto* bench = app.add_subcommand("bench", "Per-epoch timing, GSCNet vs BernNet");

  CsbmOptions csbm;
  auto* csbm_gen = app.add_subcommand("csbm-gen", "Write a CSBM dataset");
  csbm_gen->add_option("--preset", csbm.preset, "homophily or heterophily")
      ->check(CLI::IsMember({"homophily", "heterophily"}));
  csbm_gen->add_option("--n", csbm.n, "Node count (even, >= 4)");
  csbm_gen->add_option("--p-intra", csbm.p_intra, "Within-class edge probability");
  csbm_gen->add_option("--p-inter", csbm.p_inter, "Between-class edge probability");
  csbm_gen->add_option("--mu", csbm.mu, "Class-mean magnitude");
  csbm_gen->add_option("--sigma", csbm.sigma, "Feature noise std");
  csbm_gen->add_option("--d", csbm.d, "Feature dimension");
  csbm_gen->add_option("--seed", csbm.seed, "Generator seed");

  AnalyzeOptions analyze_opts;
  auto* analyze = app.add_subcommand(
      "analyze", "Graph statistics, label smoothness and basis classification");
  analyze->add_option("--edges", analyze_opts.edges, "Edge list file");
  analyze->add_option("--features", analyze_opts.features, "Feature CSV");
  analyze->add_option("--labels", analyze_opts.labels, "Label file");
  analyze->add_option("--num-classes", analyze_opts.num_classes, "Class count");

  std::uint64_t verify_seed = 0;
  auto* verify = app.add_subcommand("verify", "Run the dense oracle suite");
  verify->add_option("--seed", verify_seed, "Seed for random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*train) return RunTrain(global);
    if (*sweep) return RunSweep(global);
    if (*oversmooth) return RunOversmooth(global);
    if (*ablate) return RunAblate(global);
    if (*bench) return RunBench(global);
    if (*csbm_gen) return RunCsbmGen(global, csbm);
    if (*analyze) return RunAnalyze(global, analyze_opts);
    if (*verify) return RunVerify(global, verify_seed);
  } catch (const gsc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
