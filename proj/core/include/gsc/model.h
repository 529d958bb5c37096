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

#ifndef GSC_MODEL_H_
#define GSC_MODEL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "gsc/feature_matrix.h"
#include "gsc/graph.h"
#include "gsc/poly_basis.h"

namespace gsc {

using Rng = std::mt19937_64;

// Propagation rule applied on top of the shared two-layer MLP.
//   kGscNet:  Z = (sum_i alpha_i (2I-L)^i + sum_j beta_j L^j) H
//   kGcn:     Z = A_n^K H                   with A_n = D-hat^-1/2 A-hat D-hat^-1/2
//   kJkNet:   Z = sum_{k=1..K} alpha_k A_n^k H
//   kBernNet: Z = sum_{k=0..K} alpha_k C(K,k)/2^K (2I-L)^{K-k} L^k H
enum class Architecture { kGscNet, kGcn, kJkNet, kBernNet };

std::string_view ArchitectureName(Architecture arch);
// Accepts "gscnet", "gcn", "jknet", "bernnet"; throws kConfig otherwise.
Architecture ParseArchitecture(std::string_view name);

enum class PropagationOrder {
  // H = MLP(X), then Z = filter(H).
  kDecoupled,
  // Z = MLP(filter(X)).
  kPropagateFirst,
};

std::string_view PropagationOrderName(PropagationOrder order);
PropagationOrder ParsePropagationOrder(std::string_view name);

struct ModelShape {
  Architecture arch = Architecture::kGscNet;
  PropagationOrder order = PropagationOrder::kDecoupled;
  std::size_t in_dim = 0;
  std::size_t hidden_dim = 64;
  std::size_t out_dim = 0;
  // GSCNet degrees; -1 drops that branch.
  int k1 = 2;
  int k2 = 2;
  // K for GCN, JKNet and BernNet.
  int depth = 2;
};

// Full trainable state. w1 is in_dim x hidden_dim and w2 hidden_dim x
// out_dim, both row-major. `filter` holds the propagation coefficients:
// alpha/beta for GSCNet, alpha[k-1] for JKNet's A_n^k, alpha[k] for
// BernNet's k-th term; empty for GCN.
struct ModelParams {
  ModelShape shape;
  std::vector<double> w1;
  std::vector<double> b1;
  std::vector<double> w2;
  std::vector<double> b2;
  FilterSpec filter;
};

enum class ParamGroup { kW1, kB1, kW2, kB2, kAlpha, kBeta };

inline constexpr std::array<ParamGroup, 6> kAllParamGroups = {
    ParamGroup::kW1, ParamGroup::kB1,    ParamGroup::kW2,
    ParamGroup::kB2, ParamGroup::kAlpha, ParamGroup::kBeta};

std::string_view ParamGroupName(ParamGroup group);
bool IsPropagationGroup(ParamGroup group);

// Same layout as ModelParams; also used for Adam moments.
struct Gradients {
  std::vector<double> w1;
  std::vector<double> b1;
  std::vector<double> w2;
  std::vector<double> b2;
  std::vector<double> alpha;
  std::vector<double> beta;
};

std::span<double> GroupValues(ModelParams& params, ParamGroup group);
std::span<const double> GroupValues(const ModelParams& params,
                                    ParamGroup group);
std::span<double> GroupValues(Gradients& grads, ParamGroup group);
std::span<const double> GroupValues(const Gradients& grads, ParamGroup group);
Gradients ZeroGradientsLike(const ModelParams& params);

// Concatenation of all groups in kAllParamGroups order.
std::vector<double> FlattenParams(const ModelParams& params);
void UnflattenParams(std::span<const double> flat, ModelParams& params);
std::vector<double> FlattenGradients(const Gradients& grads);

struct TrainConfig {
  double lr_linear = 0.01;
  double lr_prop = 0.01;
  double weight_decay = 0.0005;
  // Dropout on the propagation input and on the MLP input respectively.
  double dropout_conv = 0.2;
  double dropout_linear = 0.2;
  int epochs = 300;
  std::uint64_t seed = 0;
  // Epochs without validation-accuracy improvement before stopping.
  int patience = 200;

  // Throws kConfig when a rate is non-positive or a dropout is outside [0,1).
  void Validate() const;
};

struct AdamState {
  Gradients first_moment;
  Gradients second_moment;
  std::int64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState For(const ModelParams& params);
};

// Symmetric uniform fan-in init: every MLP weight and bias is drawn from
// U(-1/sqrt(fan_in), 1/sqrt(fan_in)). Propagation coefficients start at 1.
ModelParams InitParams(const ModelShape& shape, std::uint64_t seed);

// Standard deviation of the MLP init for a layer with `fan_in` inputs.
double InitStddev(std::size_t fan_in);

enum class ForwardMode { kTrain, kEval };

// Inverted-dropout record: kept entries are scaled by `scale`, dropped ones
// zeroed. Empty when dropout is off.
struct DropoutMask {
  std::vector<std::uint8_t> keep;
  double scale = 1.0;
  bool empty() const { return keep.empty(); }
};

// Non-zero entries of a row-major matrix, in row-major order.
struct CompressedRows {
  std::size_t cols = 0;
  std::vector<std::size_t> row_start;  // rows() + 1 offsets
  std::vector<std::uint32_t> col;
  std::vector<double> value;
  std::size_t rows() const {
    return row_start.empty() ? 0 : row_start.size() - 1;
  }
};

// Intermediate values kept for the backward pass.
struct Tape {
  CompressedRows mlp_input;  // after input dropout
  FeatureMatrix pre_activation;
  FeatureMatrix hidden;  // relu(pre_activation)
  FeatureMatrix filter_input;  // after propagation-input dropout
  FeatureMatrix mlp_output;  // decoupled order: before filter dropout
  DropoutMask mlp_input_mask;  // propagate-first order only
  DropoutMask filter_input_mask;
  // Architecture-specific propagated blocks (basis terms).
  std::vector<FeatureMatrix> blocks;
};

struct ForwardResult {
  FeatureMatrix logits;
  Tape tape;
};

// Eval mode ignores dropout and never touches `rng`.
ForwardResult Forward(const ModelParams& params, const SparseGraph& g,
                      const FeatureMatrix& x, ForwardMode mode,
                      const TrainConfig& config, Rng& rng);

// Applies only the propagation rule of `params` to `h`.
FeatureMatrix ApplyPropagation(const ModelParams& params, const SparseGraph& g,
                               const FeatureMatrix& h);

struct LossAndGradient {
  double loss = 0.0;
  Gradients grads;
};

// Mean softmax cross-entropy over masked nodes, with gradients from a
// hand-derived backward pass. Dropout follows `config` (train mode).
LossAndGradient ComputeLossAndGrad(const ModelParams& params,
                                   const SparseGraph& g, const FeatureMatrix& x,
                                   std::span<const int> labels,
                                   const NodeMask& mask,
                                   const TrainConfig& config, Rng& rng);

// Mean cross-entropy of `logits` over masked nodes.
double CrossEntropy(const FeatureMatrix& logits, std::span<const int> labels,
                    const NodeMask& mask);

// One bias-corrected Adam update. MLP groups use lr_linear plus L2 weight
// decay folded into the gradient; alpha/beta use lr_prop and no decay.
void AdamStep(ModelParams& params, const Gradients& grads, AdamState& state,
              const TrainConfig& config);

// Row-wise argmax; ties go to the lowest class index.
std::vector<int> Predict(const FeatureMatrix& logits);

// Fraction of masked nodes predicted correctly; 0 for an empty mask.
double Accuracy(std::span<const int> predictions, std::span<const int> labels,
                const NodeMask& mask);

// Checkpoint form: shape metadata, arch tag, flat parameter arrays and the
// filter spec. Throws kConfig on malformed or inconsistent input.
nlohmann::json ModelParamsToJson(const ModelParams& params);
ModelParams ModelParamsFromJson(const nlohmann::json& j);

}  // namespace gsc

#endif  // GSC_MODEL_H_
