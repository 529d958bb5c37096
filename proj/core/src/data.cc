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

#include "gsc/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <string_view>

#include "gsc/error.h"
#include "gsc/model.h"
#include "gsc/pnca.h"

namespace gsc {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::ifstream OpenInput(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void AppendDouble(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

std::size_t CountSet(const NodeMask& m) {
  return static_cast<std::size_t>(
      std::count_if(m.begin(), m.end(), [](auto v) { return v != 0; }));
}

}  // namespace

void Dataset::Validate() const {
  const std::size_t n = graph.num_nodes();
  if (features.rows() != n || labels.size() != n) {
    throw Error(ErrorCode::kInvalidInput,
                "dataset rows disagree: graph " + std::to_string(n) +
                    ", features " + std::to_string(features.rows()) +
                    ", labels " + std::to_string(labels.size()));
  }
  for (int y : labels) {
    if (y < 0 || y >= num_classes) {
      throw Error(ErrorCode::kInvalidInput,
                  "label " + std::to_string(y) + " outside [0, " +
                      std::to_string(num_classes) + ")");
    }
  }
}

std::size_t Split::train_size() const { return CountSet(train); }
std::size_t Split::val_size() const { return CountSet(val); }
std::size_t Split::test_size() const { return CountSet(test); }

Split RandomSplit(std::size_t n, std::array<double, 3> ratios,
                  std::uint64_t seed) {
  const double sum = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(sum - 1.0) > 1e-9 ||
      std::any_of(ratios.begin(), ratios.end(),
                  [](double r) { return r < 0.0; })) {
    throw Error(ErrorCode::kInvalidInput, "split ratios must sum to 1");
  }
  // The epsilon absorbs representation error such as 0.6 * 5 = 2.9999...
  auto floor_count = [n](double r) {
    return static_cast<std::size_t>(std::floor(r * static_cast<double>(n) + 1e-9));
  };
  const std::size_t n_val = floor_count(ratios[1]);
  const std::size_t n_test = floor_count(ratios[2]);
  const std::size_t n_train = n - n_val - n_test;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  Split split{NodeMask(n, 0), NodeMask(n, 0), NodeMask(n, 0)};
  for (std::size_t k = 0; k < n; ++k) {
    NodeMask& target = k < n_train           ? split.train
                       : k < n_train + n_val ? split.val
                                             : split.test;
    target[order[k]] = 1;
  }
  return split;
}

void CsbmParams::Validate() const {
  if (n < 4 || n % 2 != 0) {
    throw Error(ErrorCode::kInvalidInput,
                "CSBM needs an even node count >= 4 for two balanced classes");
  }
  for (double p : {p_intra, p_inter}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kInvalidInput, "CSBM probabilities must lie in [0, 1]");
    }
  }
  if (p_intra == 0.0 && p_inter == 0.0) {
    throw Error(ErrorCode::kDegenerateInput,
                "both edge probabilities are 0; the graph would be empty");
  }
  if (!(sigma >= 0.0)) throw Error(ErrorCode::kInvalidInput, "sigma must be >= 0");
  if (d == 0) throw Error(ErrorCode::kInvalidInput, "feature dimension must be > 0");
}

CsbmParams CsbmForDegree(std::size_t n, double expected_degree, double ratio,
                         std::uint64_t seed) {
  CsbmParams p;
  p.n = n;
  p.seed = seed;
  // Expected degree = (n/2 - 1) p_intra + (n/2) p_inter.
  const double half = static_cast<double>(n) / 2.0;
  p.p_inter = expected_degree / ((half - 1.0) * ratio + half);
  p.p_intra = ratio * p.p_inter;
  return p;
}

CsbmParams CsbmPreset(const std::string& name, std::size_t n,
                      std::uint64_t seed) {
  if (name == "homophily") return CsbmForDegree(n, 10.0, 4.0, seed);
  if (name == "heterophily") return CsbmForDegree(n, 10.0, 0.25, seed);
  throw Error(ErrorCode::kConfig, "unknown CSBM preset '" + name + "'");
}

Dataset GenerateCsbm(const CsbmParams& params) {
  params.Validate();
  const std::size_t n = params.n;
  Rng rng(params.seed);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  Dataset data;
  data.num_classes = 2;
  data.labels.assign(n, 0);
  for (std::size_t k = n / 2; k < n; ++k) data.labels[order[k]] = 1;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p =
          data.labels[i] == data.labels[j] ? params.p_intra : params.p_inter;
      if (unit(rng) < p) {
        edges.push_back({static_cast<int>(i), static_cast<int>(j)});
      }
    }
  }
  data.graph = BuildCsr(edges, n);

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> u(params.d);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& v : u) v = normal(rng);
    norm = std::sqrt(std::inner_product(u.begin(), u.end(), u.begin(), 0.0));
  }
  for (double& v : u) v /= norm;

  data.features = FeatureMatrix(n, params.d);
  for (std::size_t i = 0; i < n; ++i) {
    const double sign = data.labels[i] == 1 ? 1.0 : -1.0;
    auto row = data.features.row(i);
    for (std::size_t c = 0; c < params.d; ++c) {
      row[c] = sign * params.mu * u[c] + params.sigma * normal(rng);
    }
  }
  return data;
}

nlohmann::json CsbmParamsToJson(const CsbmParams& p) {
  return {{"n", p.n},         {"p_intra", p.p_intra}, {"p_inter", p.p_inter},
          {"mu", p.mu},       {"sigma", p.sigma},     {"d", p.d},
          {"seed", p.seed}};
}

CsbmParams CsbmParamsFromJson(const nlohmann::json& j) {
  CsbmParams p;
  try {
    if (j.contains("preset")) {
      p = CsbmPreset(j.at("preset").get<std::string>(),
                     j.value("n", std::size_t{1000}),
                     j.value("seed", std::uint64_t{0}));
    }
    p.n = j.value("n", p.n);
    p.p_intra = j.value("p_intra", p.p_intra);
    p.p_inter = j.value("p_inter", p.p_inter);
    p.mu = j.value("mu", p.mu);
    p.sigma = j.value("sigma", p.sigma);
    p.d = j.value("d", p.d);
    p.seed = j.value("seed", p.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("csbm params: ") + e.what());
  }
  return p;
}

FeatureMatrix ParseFeatureCsv(std::istream& in) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = Trim(line);
    if (view.empty()) continue;
    std::size_t count = 0;
    while (true) {
      const std::size_t comma = view.find(',');
      const std::string_view cell = Trim(view.substr(0, comma));
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw Error(ErrorCode::kDataFormat,
                    "unparseable feature value '" + std::string(cell) + "'",
                    line_no);
      }
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kDataFormat, "non-finite feature value", line_no);
      }
      values.push_back(v);
      ++count;
      if (comma == std::string_view::npos) break;
      view.remove_prefix(comma + 1);
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw Error(ErrorCode::kDataFormat,
                  "expected " + std::to_string(cols) + " columns, got " +
                      std::to_string(count),
                  line_no);
    }
    ++rows;
  }
  FeatureMatrix x(rows, cols);
  std::copy(values.begin(), values.end(), x.values().begin());
  return x;
}

void WriteFeatureCsv(const FeatureMatrix& x, std::ostream& out) {
  std::string line;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    line.clear();
    const auto row = x.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line.push_back(',');
      AppendDouble(line, row[c]);
    }
    line.push_back('\n');
    out << line;
  }
}

std::vector<int> ParseLabels(std::istream& in, std::optional<int> num_classes) {
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = Trim(line);
    if (view.empty()) continue;
    int y = 0;
    auto [ptr, ec] = std::from_chars(view.data(), view.data() + view.size(), y);
    if (ec != std::errc() || ptr != view.data() + view.size()) {
      throw Error(ErrorCode::kDataFormat,
                  "unparseable label '" + std::string(view) + "'", line_no);
    }
    if (y < 0 || (num_classes && y >= *num_classes)) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  "label " + std::to_string(y) + " out of range", line_no);
    }
    labels.push_back(y);
  }
  return labels;
}

void WriteLabels(std::span<const int> labels, std::ostream& out) {
  for (int y : labels) out << y << '\n';
}

Dataset LoadDataset(const std::filesystem::path& edge_path,
                    const std::filesystem::path& feature_path,
                    const std::filesystem::path& label_path,
                    std::optional<int> num_classes) {
  Dataset data;
  {
    std::ifstream in = OpenInput(feature_path);
    data.features = ParseFeatureCsv(in);
  }
  {
    std::ifstream in = OpenInput(label_path);
    data.labels = ParseLabels(in, num_classes);
  }
  const std::size_t n = data.features.rows();
  if (data.labels.size() != n) {
    throw Error(ErrorCode::kRowCountMismatch,
                label_path.string() + " has " +
                    std::to_string(data.labels.size()) + " labels but " +
                    feature_path.string() + " has " + std::to_string(n) +
                    " rows",
                std::min(data.labels.size(), n) + 1);
  }
  EdgeList edges = ReadEdgeList(edge_path);
  for (std::size_t k = 0; k < edges.edges.size(); ++k) {
    const Edge& e = edges.edges[k];
    if (static_cast<std::size_t>(std::max(e.u, e.v)) >= n) {
      throw Error(ErrorCode::kRowCountMismatch,
                  edge_path.string() + ": node id beyond the " +
                      std::to_string(n) + " feature rows",
                  edges.lines[k]);
    }
  }
  data.graph = BuildCsr(edges.edges, n);
  int max_label = -1;
  for (int y : data.labels) max_label = std::max(max_label, y);
  data.num_classes = num_classes.value_or(max_label + 1);
  data.Validate();
  return data;
}

void SaveDataset(const Dataset& data, const std::filesystem::path& edge_path,
                 const std::filesystem::path& feature_path,
                 const std::filesystem::path& label_path) {
  {
    std::ofstream out = OpenOutput(edge_path);
    WriteEdgeList(data.graph, out);
  }
  {
    std::ofstream out = OpenOutput(feature_path);
    WriteFeatureCsv(data.features, out);
  }
  {
    std::ofstream out = OpenOutput(label_path);
    WriteLabels(data.labels, out);
  }
}

DatasetStats Describe(const Dataset& data) {
  return {data.graph.num_nodes(),       data.graph.num_undirected_edges(),
          data.features.cols(),         data.num_classes,
          data.graph.CountComponents(), data.graph.num_isolated()};
}

}  // namespace gsc
