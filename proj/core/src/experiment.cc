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

#include "gsc/experiment.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "gsc/error.h"
#include "gsc/pnca.h"
#include "gsc/poly_basis.h"

namespace gsc {
namespace {

using Json = nlohmann::json;

void CheckKeys(const Json& j, std::initializer_list<std::string_view> allowed,
               const std::string& context) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kConfig, context + " must be a JSON object");
  }
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw Error(ErrorCode::kConfig,
                  "unknown key '" + item.key() + "' in " + context);
    }
  }
}

template <typename T>
void Read(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::string FormatDouble(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void WriteJsonFile(const std::filesystem::path& path, const Json& j) {
  std::ofstream out = OpenOutput(path);
  out << j.dump(2) << '\n';
}

Json SummaryHeader(const std::string& command, const ExperimentConfig& config) {
  return {{"schema", kSchemaVersion},
          {"command", command},
          {"config", ExperimentConfigToJson(config)}};
}

Json ShapeToJson(const ModelShape& s) {
  return {{"arch", ArchitectureName(s.arch)},
          {"order", PropagationOrderName(s.order)},
          {"hidden", s.hidden_dim},
          {"k1", s.k1},
          {"k2", s.k2},
          {"depth", s.depth}};
}

// Runs every (shape, seed) pair as an independent job.
std::vector<std::vector<RunRecord>> RunGrid(const Dataset& data,
                                            const ExperimentConfig& config,
                                            const std::vector<ModelShape>& shapes) {
  const std::size_t num_seeds = config.seeds.size();
  std::vector<std::vector<RunRecord>> out(shapes.size(),
                                          std::vector<RunRecord>(num_seeds));
  ParallelFor(shapes.size() * num_seeds, config.threads, [&](std::size_t job) {
    const std::size_t s = job / num_seeds;
    const std::size_t r = job % num_seeds;
    const std::uint64_t seed = config.seeds[r];
    TrainConfig train = config.train;
    train.seed = seed;
    const Split split =
        RandomSplit(data.graph.num_nodes(), config.split_ratios, seed);
    out[s][r] = TrainModel(data, split, shapes[s], train);
  });
  return out;
}

ModelShape BaseShape(const Dataset& data, const ExperimentConfig& config) {
  ModelShape shape = config.shape;
  shape.in_dim = data.features.cols();
  shape.out_dim = static_cast<std::size_t>(data.num_classes);
  return shape;
}

void WriteCsv(const std::filesystem::path& path, const std::string& header,
              const std::vector<std::string>& rows) {
  std::ofstream out = OpenOutput(path);
  out << header << '\n';
  for (const std::string& row : rows) out << row << '\n';
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (repeats < 1) throw Error(ErrorCode::kConfig, "repeats must be >= 1");
  if (seeds.size() != static_cast<std::size_t>(repeats)) {
    throw Error(ErrorCode::kConfig,
                "seed list has " + std::to_string(seeds.size()) +
                    " entries but repeats is " + std::to_string(repeats));
  }
  if (threads < 1) throw Error(ErrorCode::kConfig, "threads must be >= 1");
  try {
    train.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  if (!dataset.csbm && (dataset.edges.empty() || dataset.features.empty() ||
                        dataset.labels.empty())) {
    throw Error(ErrorCode::kConfig,
                "dataset needs a csbm block or edges/features/labels paths");
  }
  for (const auto& range : {sweep.k1_range, sweep.k2_range}) {
    if (range[0] < 0 || range[1] > 6 || range[0] > range[1]) {
      throw Error(ErrorCode::kConfig, "sweep ranges must lie within [0, 6]");
    }
  }
  for (int d : oversmooth.depths) {
    if (d < 1) throw Error(ErrorCode::kConfig, "oversmooth depths must be >= 1");
  }
  if (ablate.degree < 0) throw Error(ErrorCode::kConfig, "ablate degree < 0");
  if (bench.warmup < 0 || bench.epochs < 0 || bench.cache_repeats < 1 ||
      bench.cache_total_degree < 2 || bench.bernnet_depth < 0) {
    throw Error(ErrorCode::kConfig, "invalid bench options");
  }
}

ExperimentConfig ExperimentConfigFromJson(const Json& j) {
  ExperimentConfig c;
  try {
    CheckKeys(j,
              {"schema", "name", "dataset", "model", "train", "split",
               "repeats", "seeds", "out_dir", "threads", "sweep", "oversmooth",
               "ablate", "bench"},
              "config");
    Read(j, "name", c.name);
    if (j.contains("dataset")) {
      const Json& d = j.at("dataset");
      CheckKeys(d, {"csbm", "edges", "features", "labels", "num_classes"},
                "dataset");
      if (d.contains("csbm")) {
        const Json& cs = d.at("csbm");
        CheckKeys(cs, {"preset", "n", "p_intra", "p_inter", "mu", "sigma", "d",
                       "seed"},
                  "dataset.csbm");
        c.dataset.csbm = CsbmParamsFromJson(cs);
        c.dataset.preset = cs.value("preset", std::string());
      }
      if (d.contains("edges")) c.dataset.edges = d.at("edges").get<std::string>();
      if (d.contains("features")) {
        c.dataset.features = d.at("features").get<std::string>();
      }
      if (d.contains("labels")) c.dataset.labels = d.at("labels").get<std::string>();
      if (d.contains("num_classes")) {
        c.dataset.num_classes = d.at("num_classes").get<int>();
      }
    }
    if (j.contains("model")) {
      const Json& m = j.at("model");
      CheckKeys(m, {"arch", "order", "hidden", "k1", "k2", "depth"}, "model");
      if (m.contains("arch")) {
        c.shape.arch = ParseArchitecture(m.at("arch").get<std::string>());
      }
      if (m.contains("order")) {
        c.shape.order = ParsePropagationOrder(m.at("order").get<std::string>());
      }
      Read(m, "hidden", c.shape.hidden_dim);
      Read(m, "k1", c.shape.k1);
      Read(m, "k2", c.shape.k2);
      Read(m, "depth", c.shape.depth);
    }
    if (j.contains("train")) {
      const Json& t = j.at("train");
      CheckKeys(t,
                {"lr_linear", "lr_prop", "weight_decay", "dropout_conv",
                 "dropout_linear", "epochs", "patience"},
                "train");
      Read(t, "lr_linear", c.train.lr_linear);
      Read(t, "lr_prop", c.train.lr_prop);
      Read(t, "weight_decay", c.train.weight_decay);
      Read(t, "dropout_conv", c.train.dropout_conv);
      Read(t, "dropout_linear", c.train.dropout_linear);
      Read(t, "epochs", c.train.epochs);
      Read(t, "patience", c.train.patience);
    }
    Read(j, "split", c.split_ratios);
    const bool has_repeats = j.contains("repeats");
    Read(j, "repeats", c.repeats);
    if (j.contains("seeds")) {
      c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
      if (!has_repeats) c.repeats = static_cast<int>(c.seeds.size());
    } else if (c.repeats > 0) {
      c.seeds.resize(static_cast<std::size_t>(c.repeats));
      std::iota(c.seeds.begin(), c.seeds.end(), std::uint64_t{0});
    }
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    Read(j, "threads", c.threads);
    if (j.contains("sweep")) {
      const Json& s = j.at("sweep");
      CheckKeys(s, {"k1", "k2"}, "sweep");
      Read(s, "k1", c.sweep.k1_range);
      Read(s, "k2", c.sweep.k2_range);
    }
    if (j.contains("oversmooth")) {
      const Json& o = j.at("oversmooth");
      CheckKeys(o, {"depths", "archs", "split_gscnet_depth"}, "oversmooth");
      Read(o, "depths", c.oversmooth.depths);
      Read(o, "split_gscnet_depth", c.oversmooth.split_gscnet_depth);
      if (o.contains("archs")) {
        c.oversmooth.archs.clear();
        for (const auto& a : o.at("archs")) {
          c.oversmooth.archs.push_back(ParseArchitecture(a.get<std::string>()));
        }
      }
    }
    if (j.contains("ablate")) {
      const Json& a = j.at("ablate");
      CheckKeys(a, {"degree"}, "ablate");
      Read(a, "degree", c.ablate.degree);
    }
    if (j.contains("bench")) {
      const Json& b = j.at("bench");
      CheckKeys(b,
                {"warmup", "epochs", "gscnet_k1", "gscnet_k2", "bernnet_depth",
                 "cache_total_degree", "cache_repeats"},
                "bench");
      Read(b, "warmup", c.bench.warmup);
      Read(b, "epochs", c.bench.epochs);
      Read(b, "gscnet_k1", c.bench.gscnet_k1);
      Read(b, "gscnet_k2", c.bench.gscnet_k2);
      Read(b, "bernnet_depth", c.bench.bernnet_depth);
      Read(b, "cache_total_degree", c.bench.cache_total_degree);
      Read(b, "cache_repeats", c.bench.cache_repeats);
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("config: ") + e.what());
  }
  c.Validate();
  return c;
}

Json ExperimentConfigToJson(const ExperimentConfig& c) {
  Json dataset = Json::object();
  if (c.dataset.csbm) {
    dataset["csbm"] = CsbmParamsToJson(*c.dataset.csbm);
    if (!c.dataset.preset.empty()) dataset["csbm"]["preset"] = c.dataset.preset;
  } else {
    dataset["edges"] = c.dataset.edges.string();
    dataset["features"] = c.dataset.features.string();
    dataset["labels"] = c.dataset.labels.string();
    if (c.dataset.num_classes) dataset["num_classes"] = *c.dataset.num_classes;
  }
  Json archs = Json::array();
  for (Architecture a : c.oversmooth.archs) archs.push_back(ArchitectureName(a));
  return {
      {"schema", kSchemaVersion},
      {"name", c.name},
      {"dataset", dataset},
      {"model", ShapeToJson(c.shape)},
      {"train",
       {{"lr_linear", c.train.lr_linear},
        {"lr_prop", c.train.lr_prop},
        {"weight_decay", c.train.weight_decay},
        {"dropout_conv", c.train.dropout_conv},
        {"dropout_linear", c.train.dropout_linear},
        {"epochs", c.train.epochs},
        {"patience", c.train.patience}}},
      {"split", c.split_ratios},
      {"repeats", c.repeats},
      {"seeds", c.seeds},
      {"out_dir", c.out_dir.string()},
      {"threads", c.threads},
      {"sweep", {{"k1", c.sweep.k1_range}, {"k2", c.sweep.k2_range}}},
      {"oversmooth",
       {{"depths", c.oversmooth.depths},
        {"archs", archs},
        {"split_gscnet_depth", c.oversmooth.split_gscnet_depth}}},
      {"ablate", {{"degree", c.ablate.degree}}},
      {"bench",
       {{"warmup", c.bench.warmup},
        {"epochs", c.bench.epochs},
        {"gscnet_k1", c.bench.gscnet_k1},
        {"gscnet_k2", c.bench.gscnet_k2},
        {"bernnet_depth", c.bench.bernnet_depth},
        {"cache_total_degree", c.bench.cache_total_degree},
        {"cache_repeats", c.bench.cache_repeats}}},
  };
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfig,
                path.string() + ": malformed JSON: " + e.what());
  }
  ExperimentConfig config = ExperimentConfigFromJson(j);
  // Dataset paths are relative to the config file.
  const std::filesystem::path base = path.parent_path();
  for (std::filesystem::path* p :
       {&config.dataset.edges, &config.dataset.features, &config.dataset.labels}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return config;
}

void ApplySeedList(ExperimentConfig& config, const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  auto parse = [&spec](std::string_view text) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error(ErrorCode::kConfig, "bad seed list '" + spec + "'");
    }
    return v;
  };
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::size_t dash = item.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(parse(item));
      continue;
    }
    const std::uint64_t lo = parse(std::string_view(item).substr(0, dash));
    const std::uint64_t hi = parse(std::string_view(item).substr(dash + 1));
    if (hi < lo || hi - lo > 100000) {
      throw Error(ErrorCode::kConfig, "bad seed range '" + item + "'");
    }
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw Error(ErrorCode::kConfig, "empty seed list");
  config.seeds = std::move(seeds);
  config.repeats = static_cast<int>(config.seeds.size());
}

Dataset MaterializeDataset(const DatasetSource& source) {
  if (source.csbm) return GenerateCsbm(*source.csbm);
  return LoadDataset(source.edges, source.features, source.labels,
                     source.num_classes);
}

MeanCi ComputeMeanCi(std::span<const double> samples, double level) {
  MeanCi ci;
  ci.count = samples.size();
  if (samples.empty()) return ci;
  const double n = static_cast<double>(samples.size());
  ci.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  if (samples.size() < 2) return ci;
  double ss = 0.0;
  for (double v : samples) ss += (v - ci.mean) * (v - ci.mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  const double t =
      boost::math::quantile(boost::math::complement(dist, (1.0 - level) / 2.0));
  ci.half_width = t * sd / std::sqrt(n);
  return ci;
}

Json MeanCiToJson(const MeanCi& ci) {
  return {{"mean", ci.mean}, {"ci95", ci.half_width}, {"count", ci.count}};
}

void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& job) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(threads, 1), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<RunRecord> RunSeeds(const Dataset& data,
                                const ExperimentConfig& config,
                                const ModelShape& shape) {
  return RunGrid(data, config, {shape}).front();
}

std::vector<double> TestAccuracies(std::span<const RunRecord> runs) {
  std::vector<double> out;
  out.reserve(runs.size());
  for (const RunRecord& r : runs) out.push_back(r.test_acc);
  return out;
}

TrainResult RunTrain(const Dataset& data, const ExperimentConfig& config) {
  config.Validate();
  TrainResult result;
  result.runs = RunSeeds(data, config, BaseShape(data, config));
  const std::vector<double> acc = TestAccuracies(result.runs);
  result.test_acc = ComputeMeanCi(acc);
  return result;
}

SweepResult RunSweep(const Dataset& data, const ExperimentConfig& config) {
  config.Validate();
  const ModelShape base = BaseShape(data, config);
  std::vector<ModelShape> shapes;
  SweepResult result;
  for (int k1 = config.sweep.k1_range[0]; k1 <= config.sweep.k1_range[1]; ++k1) {
    for (int k2 = config.sweep.k2_range[0]; k2 <= config.sweep.k2_range[1];
         ++k2) {
      ModelShape s = base;
      s.arch = Architecture::kGscNet;
      s.k1 = k1;
      s.k2 = k2;
      shapes.push_back(s);
      result.cells.push_back({k1, k2, {}, {}});
    }
  }
  const auto runs = RunGrid(data, config, shapes);
  double lo = 1.0;
  double hi = 0.0;
  for (std::size_t c = 0; c < shapes.size(); ++c) {
    result.cells[c].accuracies = TestAccuracies(runs[c]);
    result.cells[c].test_acc = ComputeMeanCi(result.cells[c].accuracies);
    lo = std::min(lo, result.cells[c].test_acc.mean);
    hi = std::max(hi, result.cells[c].test_acc.mean);
  }
  result.spread = shapes.empty() ? 0.0 : hi - lo;
  return result;
}

ModelShape ShapeForDepth(const ModelShape& base, Architecture arch, int depth,
                         bool split_gscnet_depth) {
  ModelShape s = base;
  s.arch = arch;
  s.depth = depth;
  if (split_gscnet_depth) {
    s.k1 = (depth + 1) / 2;
    s.k2 = depth / 2;
  } else {
    s.k1 = depth;
    s.k2 = depth;
  }
  return s;
}

OversmoothResult RunOversmooth(const Dataset& data,
                               const ExperimentConfig& config) {
  config.Validate();
  const ModelShape base = BaseShape(data, config);
  std::vector<int> depths = config.oversmooth.depths;
  std::sort(depths.begin(), depths.end());
  depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
  std::vector<ModelShape> shapes;
  OversmoothResult result;
  for (Architecture arch : config.oversmooth.archs) {
    for (int depth : depths) {
      shapes.push_back(ShapeForDepth(base, arch, depth,
                                      config.oversmooth.split_gscnet_depth));
      result.rows.push_back({arch, depth, {}, {}});
    }
  }
  const auto runs = RunGrid(data, config, shapes);
  for (std::size_t r = 0; r < shapes.size(); ++r) {
    result.rows[r].accuracies = TestAccuracies(runs[r]);
    result.rows[r].test_acc = ComputeMeanCi(result.rows[r].accuracies);
  }
  if (!depths.empty()) {
    for (std::size_t a = 0; a < config.oversmooth.archs.size(); ++a) {
      double best = 0.0;
      for (std::size_t d = 0; d < depths.size(); ++d) {
        best = std::max(best, result.rows[a * depths.size() + d].test_acc.mean);
      }
      const double last =
          result.rows[a * depths.size() + depths.size() - 1].test_acc.mean;
      result.drops.emplace_back(config.oversmooth.archs[a], best - last);
    }
  }
  return result;
}

std::string_view ActivationVariantName(ActivationVariant v) {
  switch (v) {
    case ActivationVariant::kPositive:
      return "positive";
    case ActivationVariant::kNegative:
      return "negative";
    case ActivationVariant::kMixed:
      return "mixed";
  }
  return "unknown";
}

AblateResult RunAblate(const Dataset& data, const ExperimentConfig& config) {
  config.Validate();
  ModelShape base = BaseShape(data, config);
  base.arch = Architecture::kGscNet;
  const int k = config.ablate.degree;
  const std::array<ActivationVariant, 3> variants = {
      ActivationVariant::kPositive, ActivationVariant::kNegative,
      ActivationVariant::kMixed};
  std::vector<ModelShape> shapes;
  for (ActivationVariant v : variants) {
    ModelShape s = base;
    s.k1 = v == ActivationVariant::kNegative ? -1 : k;
    s.k2 = v == ActivationVariant::kPositive ? -1 : k;
    shapes.push_back(s);
  }
  const auto runs = RunGrid(data, config, shapes);
  AblateResult result;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    AblateRow row;
    row.variant = variants[i];
    row.accuracies = TestAccuracies(runs[i]);
    row.test_acc = ComputeMeanCi(row.accuracies);
    result.rows.push_back(std::move(row));
  }
  return result;
}

BenchResult RunBench(const Dataset& data, const ExperimentConfig& config) {
  config.Validate();
  const BenchOptions& opt = config.bench;
  if (opt.epochs <= opt.warmup) {
    throw Error(ErrorCode::kConfig,
                "bench: epochs (" + std::to_string(opt.epochs) +
                    ") must exceed warmup (" + std::to_string(opt.warmup) +
                    "); the measurement window is empty");
  }
  const ModelShape base = BaseShape(data, config);
  ModelShape gsc = base;
  gsc.arch = Architecture::kGscNet;
  gsc.k1 = opt.gscnet_k1;
  gsc.k2 = opt.gscnet_k2;
  ModelShape bern = base;
  bern.arch = Architecture::kBernNet;
  bern.depth = opt.bernnet_depth;

  TrainConfig train = config.train;
  train.seed = config.seeds.front();
  train.epochs = opt.epochs;
  train.patience = opt.epochs + 1;
  const Split split =
      RandomSplit(data.graph.num_nodes(), config.split_ratios, train.seed);

  BenchResult result;
  // Timing runs are sequential so they do not compete for cores.
  for (const auto& [label, shape] :
       {std::pair<std::string, ModelShape>{"gscnet", gsc},
        std::pair<std::string, ModelShape>{"bernnet", bern}}) {
    const RunRecord run = TrainModel(data, split, shape, train);
    BenchEntry entry;
    entry.label = label;
    entry.shape = shape;
    entry.total_seconds = run.total_seconds;
    for (const EpochRecord& e : run.epochs) {
      if (e.epoch > opt.warmup) entry.epoch_ms.push_back(e.epoch_ms);
    }
    entry.mean_epoch_ms =
        std::accumulate(entry.epoch_ms.begin(), entry.epoch_ms.end(), 0.0) /
        static_cast<double>(entry.epoch_ms.size());
    result.entries.push_back(std::move(entry));
  }

  // Minimum over repeats is the least noisy estimate of the build cost. The
  // two degrees alternate so that drift in machine load hits both alike.
  auto time_cache = [&](int total) {
    const int k1 = total / 2;
    const int k2 = total - k1;
    const auto t0 = std::chrono::steady_clock::now();
    const BasisCache built = BuildBasisCache(data.graph, data.features, k1, k2);
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
  };
  CacheScaling& cache = result.cache;
  cache.small_degree = opt.cache_total_degree;
  cache.large_degree = 2 * opt.cache_total_degree;
  cache.small_ms = std::numeric_limits<double>::infinity();
  cache.large_ms = std::numeric_limits<double>::infinity();
  for (int r = 0; r < opt.cache_repeats; ++r) {
    cache.small_ms = std::min(cache.small_ms, time_cache(cache.small_degree));
    cache.large_ms = std::min(cache.large_ms, time_cache(cache.large_degree));
  }
  cache.ratio = cache.large_ms / cache.small_ms;
  return result;
}

Json RunRecordToJson(const RunRecord& run) {
  return {{"seed", run.seed},
          {"epochs_run", run.epochs.empty() ? 0 : run.epochs.back().epoch},
          {"best_epoch", run.best_epoch},
          {"best_val_acc", run.best_val_acc},
          {"test_acc", run.test_acc},
          {"total_seconds", run.total_seconds},
          {"learned_filter", FilterSpecToJson(run.learned_filter)}};
}

void WriteTrainOutputs(const TrainResult& result, const ExperimentConfig& config,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<RunRecord> runs = result.runs;
  std::sort(runs.begin(), runs.end(),
            [](const RunRecord& a, const RunRecord& b) { return a.seed < b.seed; });
  {
    std::ofstream out = OpenOutput(dir / "epochs.jsonl");
    for (const RunRecord& run : runs) {
      for (const EpochRecord& e : run.epochs) {
        const Json line = {{"schema", kSchemaVersion},
                           {"seed", run.seed},
                           {"epoch", e.epoch},
                           {"train_loss", e.train_loss},
                           {"val_loss", e.val_loss},
                           {"train_acc", e.train_acc},
                           {"val_acc", e.val_acc},
                           {"test_acc", e.test_acc},
                           {"epoch_ms", e.epoch_ms}};
        out << line.dump() << '\n';
      }
    }
  }
  Json summary = SummaryHeader("train", config);
  summary["runs"] = Json::array();
  std::vector<std::string> rows;
  for (const RunRecord& run : runs) {
    summary["runs"].push_back(RunRecordToJson(run));
    rows.push_back(std::to_string(run.seed) + "," +
                   std::to_string(run.best_epoch) + "," +
                   FormatDouble(run.best_val_acc) + "," +
                   FormatDouble(run.test_acc) + "," +
                   FormatDouble(run.total_seconds));
  }
  summary["test_acc"] = MeanCiToJson(result.test_acc);
  WriteJsonFile(dir / "summary.json", summary);
  WriteCsv(dir / "runs.csv", "seed,best_epoch,best_val_acc,test_acc,total_seconds",
           rows);
}

void WriteSweepOutputs(const SweepResult& result, const ExperimentConfig& config,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  Json summary = SummaryHeader("sweep", config);
  summary["cells"] = Json::array();
  std::vector<std::string> rows;
  for (const SweepCell& c : result.cells) {
    summary["cells"].push_back({{"k1", c.k1},
                                {"k2", c.k2},
                                {"test_acc", MeanCiToJson(c.test_acc)},
                                {"accuracies", c.accuracies}});
    rows.push_back(std::to_string(c.k1) + "," + std::to_string(c.k2) + "," +
                   FormatDouble(c.test_acc.mean) + "," +
                   FormatDouble(c.test_acc.half_width));
  }
  summary["spread"] = result.spread;
  WriteJsonFile(dir / "summary.json", summary);
  WriteCsv(dir / "sweep.csv", "k1,k2,mean_test_acc,ci95", rows);
}

void WriteOversmoothOutputs(const OversmoothResult& result,
                            const ExperimentConfig& config,
                            const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  Json summary = SummaryHeader("oversmooth", config);
  summary["rows"] = Json::array();
  std::vector<std::string> rows;
  for (const OversmoothRow& r : result.rows) {
    summary["rows"].push_back({{"arch", ArchitectureName(r.arch)},
                               {"depth", r.depth},
                               {"test_acc", MeanCiToJson(r.test_acc)},
                               {"accuracies", r.accuracies}});
    rows.push_back(std::string(ArchitectureName(r.arch)) + "," +
                   std::to_string(r.depth) + "," + FormatDouble(r.test_acc.mean) +
                   "," + FormatDouble(r.test_acc.half_width));
  }
  Json drops = Json::object();
  for (const auto& [arch, drop] : result.drops) {
    drops[std::string(ArchitectureName(arch))] = drop;
  }
  summary["drops"] = drops;
  WriteJsonFile(dir / "summary.json", summary);
  WriteCsv(dir / "oversmooth.csv", "arch,depth,mean_test_acc,ci95", rows);
}

void WriteAblateOutputs(const AblateResult& result,
                        const ExperimentConfig& config,
                        const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  Json summary = SummaryHeader("ablate", config);
  summary["rows"] = Json::array();
  std::vector<std::string> rows;
  for (const AblateRow& r : result.rows) {
    summary["rows"].push_back({{"variant", ActivationVariantName(r.variant)},
                               {"test_acc", MeanCiToJson(r.test_acc)},
                               {"accuracies", r.accuracies}});
    rows.push_back(std::string(ActivationVariantName(r.variant)) + "," +
                   FormatDouble(r.test_acc.mean) + "," +
                   FormatDouble(r.test_acc.half_width));
  }
  WriteJsonFile(dir / "summary.json", summary);
  WriteCsv(dir / "ablate.csv", "variant,mean_test_acc,ci95", rows);
}

void WriteBenchOutputs(const BenchResult& result, const ExperimentConfig& config,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  Json summary = SummaryHeader("bench", config);
  summary["entries"] = Json::array();
  std::vector<std::string> rows;
  std::vector<std::string> series;
  for (const BenchEntry& e : result.entries) {
    summary["entries"].push_back({{"label", e.label},
                                  {"model", ShapeToJson(e.shape)},
                                  {"mean_epoch_ms", e.mean_epoch_ms},
                                  {"total_seconds", e.total_seconds},
                                  {"measured_epochs", e.epoch_ms.size()}});
    rows.push_back(e.label + "," + FormatDouble(e.mean_epoch_ms) + "," +
                   FormatDouble(e.total_seconds));
    double cumulative = 0.0;
    for (std::size_t i = 0; i < e.epoch_ms.size(); ++i) {
      cumulative += e.epoch_ms[i] / 1000.0;
      series.push_back(e.label + "," + std::to_string(i + 1) + "," +
                       FormatDouble(e.epoch_ms[i]) + "," +
                       FormatDouble(cumulative));
    }
  }
  const CacheScaling& c = result.cache;
  summary["cache_scaling"] = {{"small_degree", c.small_degree},
                              {"large_degree", c.large_degree},
                              {"small_ms", c.small_ms},
                              {"large_ms", c.large_ms},
                              {"ratio", c.ratio}};
  WriteJsonFile(dir / "summary.json", summary);
  WriteCsv(dir / "bench.csv", "label,mean_epoch_ms,total_seconds", rows);
  WriteCsv(dir / "bench_series.csv", "label,epoch,epoch_ms,cumulative_seconds",
           series);
}

Json AnalyzeDataset(const Dataset& data) {
  const DatasetStats stats = Describe(data);
  Json out = {{"schema", kSchemaVersion},
              {"nodes", stats.nodes},
              {"edges", stats.edges},
              {"features", stats.features},
              {"classes", stats.classes},
              {"components", stats.components},
              {"isolated", stats.isolated},
              {"self_loops", data.graph.num_self_loops()}};
  if (stats.edges > 0) {
    out["label_smoothness"] = LabelSmoothness(data.graph, data.labels);
  } else {
    out["label_smoothness"] = nullptr;
  }
  const std::size_t n = data.graph.num_nodes();
  if (n > kClassifyMaxNodes) {
    out["classifications"] = "skipped: graph exceeds the dense size guard";
    return out;
  }
  const SparseGraph looped = data.graph.WithSelfLoops();
  auto describe = [&](const DenseMatrix& t) {
    const ActivationClass c = ClassifyGraphActivation(t, looped);
    Json j = {{"polarity", c.positive() ? "positive" : "negative"}};
    if (c.witness) j["witness"] = {c.witness->row, c.witness->col};
    if (!c.reason.empty()) j["reason"] = c.reason;
    return j;
  };
  out["classifications"] = {
      {"shifted_2I_minus_L", describe(DenseShifted(data.graph))},
      {"laplacian_L", describe(DenseLaplacian(data.graph))},
      {"gcn_norm", describe(DenseGcnNorm(data.graph))}};
  return out;
}

}  // namespace gsc
