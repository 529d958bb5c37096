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

#include "gsc/model.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "gsc/error.h"

namespace gsc {
namespace {

// out = a * w + bias, with w stored row-major as a.cols x out_cols.
FeatureMatrix Affine(const CompressedRows& a, std::span<const double> w,
                     std::span<const double> bias, std::size_t out_cols) {
  FeatureMatrix out(a.rows(), out_cols);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* oi = out.row(i).data();
    std::copy(bias.begin(), bias.end(), oi);
    for (std::size_t e = a.row_start[i]; e < a.row_start[i + 1]; ++e) {
      const double v = a.value[e];
      const double* wk = w.data() + a.col[e] * out_cols;
      for (std::size_t j = 0; j < out_cols; ++j) oi[j] += v * wk[j];
    }
  }
  return out;
}

FeatureMatrix Affine(const FeatureMatrix& a, std::span<const double> w,
                     std::span<const double> bias, std::size_t out_cols) {
  FeatureMatrix out(a.rows(), out_cols);
  const std::size_t in_cols = a.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* oi = out.row(i).data();
    std::copy(bias.begin(), bias.end(), oi);
    const double* ai = a.row(i).data();
    for (std::size_t k = 0; k < in_cols; ++k) {
      const double v = ai[k];
      if (v == 0.0) continue;
      const double* wk = w.data() + k * out_cols;
      for (std::size_t j = 0; j < out_cols; ++j) oi[j] += v * wk[j];
    }
  }
  return out;
}

// dw += a^T * delta, dbias += column sums of delta.
void AccumulateAffineGrads(const CompressedRows& a, const FeatureMatrix& delta,
                           std::span<double> dw, std::span<double> dbias) {
  const std::size_t out_cols = delta.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* di = delta.row(i).data();
    for (std::size_t j = 0; j < out_cols; ++j) dbias[j] += di[j];
    for (std::size_t e = a.row_start[i]; e < a.row_start[i + 1]; ++e) {
      const double v = a.value[e];
      double* dwk = dw.data() + a.col[e] * out_cols;
      for (std::size_t j = 0; j < out_cols; ++j) dwk[j] += v * di[j];
    }
  }
}

void AccumulateAffineGrads(const FeatureMatrix& a, const FeatureMatrix& delta,
                           std::span<double> dw, std::span<double> dbias) {
  const std::size_t in_cols = a.cols();
  const std::size_t out_cols = delta.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* di = delta.row(i).data();
    for (std::size_t j = 0; j < out_cols; ++j) dbias[j] += di[j];
    const double* ai = a.row(i).data();
    for (std::size_t k = 0; k < in_cols; ++k) {
      const double v = ai[k];
      if (v == 0.0) continue;
      double* dwk = dw.data() + k * out_cols;
      for (std::size_t j = 0; j < out_cols; ++j) dwk[j] += v * di[j];
    }
  }
}

// delta * w^T
FeatureMatrix BackpropInput(const FeatureMatrix& delta,
                            std::span<const double> w, std::size_t in_cols) {
  const std::size_t out_cols = delta.cols();
  FeatureMatrix out(delta.rows(), in_cols);
  for (std::size_t i = 0; i < delta.rows(); ++i) {
    const double* di = delta.row(i).data();
    double* oi = out.row(i).data();
    for (std::size_t k = 0; k < in_cols; ++k) {
      const double* wk = w.data() + k * out_cols;
      double sum = 0.0;
      for (std::size_t j = 0; j < out_cols; ++j) sum += di[j] * wk[j];
      oi[k] = sum;
    }
  }
  return out;
}

// Inverted dropout. Returns an empty mask when nothing is dropped.
DropoutMask ApplyDropout(FeatureMatrix& m, double rate, Rng& rng) {
  if (rate <= 0.0) return {};
  DropoutMask mask;
  mask.keep.resize(m.size());
  mask.scale = 1.0 / (1.0 - rate);
  // Same draw as uniform_real_distribution<double>(0, 1) on a 64-bit engine:
  // one engine call scaled by 2^-64.
  static_assert(Rng::min() == 0 && Rng::max() == ~std::uint64_t{0});
  auto values = m.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool keep = !(static_cast<double>(rng()) * 0x1p-64 < rate);
    mask.keep[i] = keep;
    values[i] = keep ? values[i] * mask.scale : 0.0;
  }
  return mask;
}

// Calls visit(k, value) for each non-zero entry of `row`, in order. Blocks of
// eight all-zero bit patterns are skipped without per-entry branches.
template <typename Visit>
void ForEachNonZero(std::span<const double> row, Visit&& visit) {
  constexpr std::size_t kBlock = 8;
  std::size_t k = 0;
  for (; k + kBlock <= row.size(); k += kBlock) {
    std::uint64_t any = 0;
    for (std::size_t t = 0; t < kBlock; ++t) {
      any |= std::bit_cast<std::uint64_t>(row[k + t]);
    }
    if (any == 0) continue;
    for (std::size_t t = k; t < k + kBlock; ++t) {
      if (row[t] != 0.0) visit(t, row[t]);
    }
  }
  for (; k < row.size(); ++k) {
    if (row[k] != 0.0) visit(k, row[k]);
  }
}

// Dropout on the raw MLP input in decoupled order, fused with compression.
// Its mask never enters the backward pass and a zero entry stays zero
// whichever way it is drawn, so only non-zero entries consume a draw, in
// row-major order. Dense inputs see the same stream as ApplyDropout.
// `rng` may be null when `rate` is zero.
CompressedRows CompressWithDropout(const FeatureMatrix& m, double rate,
                                   Rng* rng) {
  const double scale = rate > 0.0 ? 1.0 / (1.0 - rate) : 1.0;
  CompressedRows out;
  out.cols = m.cols();
  out.row_start.reserve(m.rows() + 1);
  out.row_start.push_back(0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ForEachNonZero(m.row(i), [&](std::size_t k, double v) {
      if (rate > 0.0) {
        if (static_cast<double>((*rng)()) * 0x1p-64 < rate) return;
        v *= scale;
        if (v == 0.0) return;
      }
      out.col.push_back(static_cast<std::uint32_t>(k));
      out.value.push_back(v);
    });
    out.row_start.push_back(out.col.size());
  }
  return out;
}

CompressedRows Compress(const FeatureMatrix& m) {
  return CompressWithDropout(m, 0.0, nullptr);
}

void ApplyMask(FeatureMatrix& m, const DropoutMask& mask) {
  if (mask.empty()) return;
  auto values = m.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = mask.keep[i] ? values[i] * mask.scale : 0.0;
  }
}

double BinomialWeight(int order, int k) {
  // C(order, k) / 2^order, exact for the small orders used here.
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (order - k + i) / i;
  return std::ldexp(c, -order);
}

// Applies the architecture's propagation operator to h. When `blocks` is
// non-null it receives the basis terms needed for coefficient gradients.
FeatureMatrix Propagate(const ModelParams& p, const SparseGraph& g,
                        const FeatureMatrix& h,
                        std::vector<FeatureMatrix>* blocks) {
  const ModelShape& s = p.shape;
  switch (s.arch) {
    case Architecture::kGscNet: {
      const BasisCache cache = BuildBasisCache(g, h, std::max(s.k1, 0),
                                               std::max(s.k2, 0));
      if (blocks) {
        blocks->clear();
        for (int i = 0; i <= p.filter.k1(); ++i) {
          blocks->push_back(cache.positive(i));
        }
        for (int j = 0; j <= p.filter.k2(); ++j) {
          blocks->push_back(cache.negative(j));
        }
      }
      return GscCombine(cache, p.filter);
    }
    case Architecture::kGcn:
      return MonomialPropagate(g, h, s.depth);
    case Architecture::kJkNet: {
      FeatureMatrix z(h.rows(), h.cols());
      FeatureMatrix cur = h;
      FeatureMatrix next;
      if (blocks) blocks->clear();
      for (int k = 1; k <= s.depth; ++k) {
        ApplyGcnNormTo(g, cur, next);
        std::swap(cur, next);
        z.AddScaled(cur, p.filter.alpha[k - 1]);
        if (blocks) blocks->push_back(cur);
      }
      return z;
    }
    case Architecture::kBernNet: {
      const int order = s.depth;
      FeatureMatrix z(h.rows(), h.cols());
      FeatureMatrix lap_power = h;
      FeatureMatrix cur;
      FeatureMatrix next;
      if (blocks) blocks->clear();
      for (int k = 0; k <= order; ++k) {
        cur = lap_power;
        for (int i = 0; i < order - k; ++i) {
          ApplyShiftedTo(g, cur, next);
          std::swap(cur, next);
        }
        z.AddScaled(cur, p.filter.alpha[k] * BinomialWeight(order, k));
        if (blocks) blocks->push_back(cur);
        if (k < order) {
          ApplyLaplacianTo(g, lap_power, next);
          std::swap(lap_power, next);
        }
      }
      return z;
    }
  }
  return h;
}

void CoefficientGrads(const ModelParams& p,
                      const std::vector<FeatureMatrix>& blocks,
                      const FeatureMatrix& dz, Gradients& grads) {
  const ModelShape& s = p.shape;
  switch (s.arch) {
    case Architecture::kGscNet: {
      const std::size_t na = p.filter.alpha.size();
      for (std::size_t i = 0; i < na; ++i) {
        grads.alpha[i] += Dot(dz, blocks[i]);
      }
      for (std::size_t j = 0; j < p.filter.beta.size(); ++j) {
        grads.beta[j] += Dot(dz, blocks[na + j]);
      }
      return;
    }
    case Architecture::kGcn:
      return;
    case Architecture::kJkNet:
      for (int k = 1; k <= s.depth; ++k) {
        grads.alpha[k - 1] += Dot(dz, blocks[k - 1]);
      }
      return;
    case Architecture::kBernNet:
      for (int k = 0; k <= s.depth; ++k) {
        grads.alpha[k] += BinomialWeight(s.depth, k) * Dot(dz, blocks[k]);
      }
      return;
  }
}

void CheckShape(const ModelParams& p, const SparseGraph& g,
                const FeatureMatrix& x) {
  const ModelShape& s = p.shape;
  if (x.cols() != s.in_dim) {
    throw Error(ErrorCode::kInvalidInput,
                "feature width " + std::to_string(x.cols()) +
                    " != model input width " + std::to_string(s.in_dim));
  }
  if (x.rows() != g.num_nodes()) {
    throw Error(ErrorCode::kInvalidInput, "feature rows != node count");
  }
  if (p.w1.size() != s.in_dim * s.hidden_dim ||
      p.w2.size() != s.hidden_dim * s.out_dim ||
      p.b1.size() != s.hidden_dim || p.b2.size() != s.out_dim) {
    throw Error(ErrorCode::kInvalidInput, "parameter sizes disagree with shape");
  }
}

std::vector<double>& Field(Gradients& g, ParamGroup group) {
  switch (group) {
    case ParamGroup::kW1:
      return g.w1;
    case ParamGroup::kB1:
      return g.b1;
    case ParamGroup::kW2:
      return g.w2;
    case ParamGroup::kB2:
      return g.b2;
    case ParamGroup::kAlpha:
      return g.alpha;
    case ParamGroup::kBeta:
      return g.beta;
  }
  return g.w1;
}

std::vector<double>& Field(ModelParams& p, ParamGroup group) {
  switch (group) {
    case ParamGroup::kW1:
      return p.w1;
    case ParamGroup::kB1:
      return p.b1;
    case ParamGroup::kW2:
      return p.w2;
    case ParamGroup::kB2:
      return p.b2;
    case ParamGroup::kAlpha:
      return p.filter.alpha;
    case ParamGroup::kBeta:
      return p.filter.beta;
  }
  return p.w1;
}

}  // namespace

std::string_view ArchitectureName(Architecture arch) {
  switch (arch) {
    case Architecture::kGscNet:
      return "gscnet";
    case Architecture::kGcn:
      return "gcn";
    case Architecture::kJkNet:
      return "jknet";
    case Architecture::kBernNet:
      return "bernnet";
  }
  return "unknown";
}

Architecture ParseArchitecture(std::string_view name) {
  for (Architecture a : {Architecture::kGscNet, Architecture::kGcn,
                         Architecture::kJkNet, Architecture::kBernNet}) {
    if (ArchitectureName(a) == name) return a;
  }
  throw Error(ErrorCode::kConfig,
              "unknown architecture '" + std::string(name) + "'");
}

std::string_view PropagationOrderName(PropagationOrder order) {
  return order == PropagationOrder::kDecoupled ? "decoupled"
                                               : "propagate_first";
}

PropagationOrder ParsePropagationOrder(std::string_view name) {
  if (name == "decoupled") return PropagationOrder::kDecoupled;
  if (name == "propagate_first") return PropagationOrder::kPropagateFirst;
  throw Error(ErrorCode::kConfig,
              "unknown propagation order '" + std::string(name) + "'");
}

std::string_view ParamGroupName(ParamGroup group) {
  switch (group) {
    case ParamGroup::kW1:
      return "w1";
    case ParamGroup::kB1:
      return "b1";
    case ParamGroup::kW2:
      return "w2";
    case ParamGroup::kB2:
      return "b2";
    case ParamGroup::kAlpha:
      return "alpha";
    case ParamGroup::kBeta:
      return "beta";
  }
  return "unknown";
}

bool IsPropagationGroup(ParamGroup group) {
  return group == ParamGroup::kAlpha || group == ParamGroup::kBeta;
}

std::span<double> GroupValues(ModelParams& params, ParamGroup group) {
  return Field(params, group);
}

std::span<const double> GroupValues(const ModelParams& params,
                                    ParamGroup group) {
  return Field(const_cast<ModelParams&>(params), group);
}

std::span<double> GroupValues(Gradients& grads, ParamGroup group) {
  return Field(grads, group);
}

std::span<const double> GroupValues(const Gradients& grads, ParamGroup group) {
  return Field(const_cast<Gradients&>(grads), group);
}

Gradients ZeroGradientsLike(const ModelParams& params) {
  Gradients g;
  for (ParamGroup group : kAllParamGroups) {
    Field(g, group).assign(GroupValues(params, group).size(), 0.0);
  }
  return g;
}

std::vector<double> FlattenParams(const ModelParams& params) {
  std::vector<double> flat;
  for (ParamGroup group : kAllParamGroups) {
    const auto v = GroupValues(params, group);
    flat.insert(flat.end(), v.begin(), v.end());
  }
  return flat;
}

void UnflattenParams(std::span<const double> flat, ModelParams& params) {
  std::size_t offset = 0;
  for (ParamGroup group : kAllParamGroups) {
    auto v = GroupValues(params, group);
    if (offset + v.size() > flat.size()) {
      throw Error(ErrorCode::kInvalidInput, "flat parameter vector too short");
    }
    std::copy_n(flat.begin() + offset, v.size(), v.begin());
    offset += v.size();
  }
  if (offset != flat.size()) {
    throw Error(ErrorCode::kInvalidInput, "flat parameter vector too long");
  }
}

std::vector<double> FlattenGradients(const Gradients& grads) {
  std::vector<double> flat;
  for (ParamGroup group : kAllParamGroups) {
    const auto v = GroupValues(grads, group);
    flat.insert(flat.end(), v.begin(), v.end());
  }
  return flat;
}

void TrainConfig::Validate() const {
  if (!(lr_linear > 0.0) || !(lr_prop > 0.0)) {
    throw Error(ErrorCode::kConfig, "learning rates must be > 0");
  }
  if (!(weight_decay >= 0.0)) {
    throw Error(ErrorCode::kConfig, "weight decay must be >= 0");
  }
  for (double p : {dropout_conv, dropout_linear}) {
    if (!(p >= 0.0 && p < 1.0)) {
      throw Error(ErrorCode::kConfig, "dropout must lie in [0, 1)");
    }
  }
  if (epochs < 0 || patience < 1) {
    throw Error(ErrorCode::kConfig, "epochs must be >= 0 and patience >= 1");
  }
}

AdamState AdamState::For(const ModelParams& params) {
  AdamState state;
  state.first_moment = ZeroGradientsLike(params);
  state.second_moment = ZeroGradientsLike(params);
  return state;
}

double InitStddev(std::size_t fan_in) {
  return 1.0 / std::sqrt(3.0 * static_cast<double>(fan_in));
}

ModelParams InitParams(const ModelShape& shape, std::uint64_t seed) {
  if (shape.in_dim == 0 || shape.hidden_dim == 0 || shape.out_dim == 0) {
    throw Error(ErrorCode::kInvalidInput, "model dimensions must be > 0");
  }
  ModelParams p;
  p.shape = shape;
  Rng rng(seed);
  auto fill = [&rng](std::vector<double>& v, std::size_t count,
                     std::size_t fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    v.resize(count);
    for (double& x : v) x = dist(rng);
  };
  fill(p.w1, shape.in_dim * shape.hidden_dim, shape.in_dim);
  fill(p.b1, shape.hidden_dim, shape.in_dim);
  fill(p.w2, shape.hidden_dim * shape.out_dim, shape.hidden_dim);
  fill(p.b2, shape.out_dim, shape.hidden_dim);

  switch (shape.arch) {
    case Architecture::kGscNet:
      if (shape.k1 < -1 || shape.k2 < -1 || (shape.k1 < 0 && shape.k2 < 0)) {
        throw Error(ErrorCode::kInvalidInput,
                    "GSCNet needs k1, k2 >= -1 with at least one branch");
      }
      p.filter = FilterSpec::Uniform(shape.k1, shape.k2, 1.0);
      break;
    case Architecture::kGcn:
      if (shape.depth < 0) throw Error(ErrorCode::kInvalidInput, "depth < 0");
      break;
    case Architecture::kJkNet:
      if (shape.depth < 1) throw Error(ErrorCode::kInvalidInput, "depth < 1");
      p.filter.alpha.assign(shape.depth, 1.0);
      break;
    case Architecture::kBernNet:
      if (shape.depth < 0) throw Error(ErrorCode::kInvalidInput, "depth < 0");
      p.filter.alpha.assign(shape.depth + 1, 1.0);
      break;
  }
  return p;
}

FeatureMatrix ApplyPropagation(const ModelParams& params, const SparseGraph& g,
                               const FeatureMatrix& h) {
  return Propagate(params, g, h, nullptr);
}

ForwardResult Forward(const ModelParams& params, const SparseGraph& g,
                      const FeatureMatrix& x, ForwardMode mode,
                      const TrainConfig& config, Rng& rng) {
  CheckShape(params, g, x);
  const ModelShape& s = params.shape;
  const bool train = mode == ForwardMode::kTrain;
  ForwardResult out;
  Tape& tape = out.tape;

  auto run_mlp = [&](const FeatureMatrix& input) {
    if (train && s.order == PropagationOrder::kDecoupled) {
      tape.mlp_input = CompressWithDropout(input, config.dropout_linear, &rng);
    } else if (train) {
      FeatureMatrix dropped = input;
      tape.mlp_input_mask = ApplyDropout(dropped, config.dropout_linear, rng);
      tape.mlp_input = Compress(dropped);
    } else {
      tape.mlp_input = Compress(input);
    }
    tape.pre_activation = Affine(tape.mlp_input, params.w1, params.b1,
                                 s.hidden_dim);
    tape.hidden = tape.pre_activation;
    for (double& v : tape.hidden.values()) v = std::max(v, 0.0);
    return Affine(tape.hidden, params.w2, params.b2, s.out_dim);
  };

  if (s.order == PropagationOrder::kDecoupled) {
    tape.mlp_output = run_mlp(x);
    FeatureMatrix filter_in = tape.mlp_output;
    if (train) {
      tape.filter_input_mask = ApplyDropout(filter_in, config.dropout_conv, rng);
    }
    tape.filter_input = std::move(filter_in);
    out.logits = Propagate(params, g, tape.filter_input, &tape.blocks);
  } else {
    FeatureMatrix filter_in = x;
    if (train) {
      tape.filter_input_mask = ApplyDropout(filter_in, config.dropout_conv, rng);
    }
    tape.filter_input = std::move(filter_in);
    FeatureMatrix propagated =
        Propagate(params, g, tape.filter_input, &tape.blocks);
    out.logits = run_mlp(propagated);
  }
  return out;
}

double CrossEntropy(const FeatureMatrix& logits, std::span<const int> labels,
                    const NodeMask& mask) {
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    if (!mask[i]) continue;
    const auto row = logits.row(i);
    const double peak = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    for (double v : row) z += std::exp(v - peak);
    total += std::log(z) + peak - row[labels[i]];
    ++count;
  }
  return count == 0 ? 0.0 : total / static_cast<double>(count);
}

LossAndGradient ComputeLossAndGrad(const ModelParams& params,
                                   const SparseGraph& g, const FeatureMatrix& x,
                                   std::span<const int> labels,
                                   const NodeMask& mask,
                                   const TrainConfig& config, Rng& rng) {
  const std::size_t n = g.num_nodes();
  if (labels.size() != n || mask.size() != n) {
    throw Error(ErrorCode::kInvalidInput, "labels/mask length != node count");
  }
  const std::size_t count =
      static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(),
                                             [](auto m) { return m != 0; }));
  if (count == 0) throw Error(ErrorCode::kInvalidInput, "empty loss mask");

  const ModelShape& s = params.shape;
  ForwardResult fwd = Forward(params, g, x, ForwardMode::kTrain, config, rng);
  const Tape& tape = fwd.tape;

  // d loss / d logits = (softmax - onehot) / count on masked rows.
  LossAndGradient result;
  result.grads = ZeroGradientsLike(params);
  Gradients& grads = result.grads;
  FeatureMatrix dlogits(n, s.out_dim);
  const double inv_count = 1.0 / static_cast<double>(count);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    const auto row = fwd.logits.row(i);
    const double peak = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    for (double v : row) z += std::exp(v - peak);
    const int label = labels[i];
    if (label < 0 || static_cast<std::size_t>(label) >= s.out_dim) {
      throw Error(ErrorCode::kInvalidInput,
                  "label " + std::to_string(label) + " outside output width");
    }
    total += std::log(z) + peak - row[label];
    auto d = dlogits.row(i);
    for (std::size_t c = 0; c < s.out_dim; ++c) {
      d[c] = std::exp(row[c] - peak) / z * inv_count;
    }
    d[label] -= inv_count;
  }
  result.loss = total * inv_count;

  // Backward through the MLP given d(MLP output); returns d(MLP input) when
  // `need_input_grad` is set.
  auto mlp_backward = [&](const FeatureMatrix& dout, bool need_input_grad) {
    AccumulateAffineGrads(tape.hidden, dout, grads.w2, grads.b2);
    FeatureMatrix dhidden = BackpropInput(dout, params.w2, s.hidden_dim);
    const auto pre = tape.pre_activation.values();
    auto dh = dhidden.values();
    for (std::size_t i = 0; i < dh.size(); ++i) {
      if (!(pre[i] > 0.0)) dh[i] = 0.0;
    }
    AccumulateAffineGrads(tape.mlp_input, dhidden, grads.w1, grads.b1);
    if (!need_input_grad) return FeatureMatrix();
    FeatureMatrix din = BackpropInput(dhidden, params.w1, s.in_dim);
    ApplyMask(din, tape.mlp_input_mask);
    return din;
  };

  if (s.order == PropagationOrder::kDecoupled) {
    CoefficientGrads(params, tape.blocks, dlogits, grads);
    // Every propagation operator here is a polynomial in one symmetric
    // matrix, so its adjoint is itself.
    FeatureMatrix dfilter_in = Propagate(params, g, dlogits, nullptr);
    ApplyMask(dfilter_in, tape.filter_input_mask);
    mlp_backward(dfilter_in, false);
  } else {
    FeatureMatrix dpropagated = mlp_backward(dlogits, true);
    CoefficientGrads(params, tape.blocks, dpropagated, grads);
  }
  return result;
}

void AdamStep(ModelParams& params, const Gradients& grads, AdamState& state,
              const TrainConfig& config) {
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(state.beta1, t);
  const double bias2 = 1.0 - std::pow(state.beta2, t);
  for (ParamGroup group : kAllParamGroups) {
    auto theta = GroupValues(params, group);
    const auto g = GroupValues(grads, group);
    auto m = GroupValues(state.first_moment, group);
    auto v = GroupValues(state.second_moment, group);
    const bool prop = IsPropagationGroup(group);
    const double lr = prop ? config.lr_prop : config.lr_linear;
    const double decay = prop ? 0.0 : config.weight_decay;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double gi = g[i] + decay * theta[i];
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * gi;
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * gi * gi;
      const double m_hat = m[i] / bias1;
      const double v_hat = v[i] / bias2;
      theta[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

std::vector<int> Predict(const FeatureMatrix& logits) {
  std::vector<int> out(logits.rows(), 0);
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const auto row = logits.row(i);
    std::size_t best = 0;
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (row[c] > row[best]) best = c;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

double Accuracy(std::span<const int> predictions, std::span<const int> labels,
                const NodeMask& mask) {
  std::size_t hit = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    ++total;
    if (predictions[i] == labels[i]) ++hit;
  }
  return total == 0 ? 0.0 : static_cast<double>(hit) / total;
}

nlohmann::json ModelParamsToJson(const ModelParams& params) {
  const ModelShape& s = params.shape;
  return {{"schema", "gscnet.checkpoint/1"},
          {"arch", ArchitectureName(s.arch)},
          {"order", PropagationOrderName(s.order)},
          {"in_dim", s.in_dim},
          {"hidden_dim", s.hidden_dim},
          {"out_dim", s.out_dim},
          {"k1", s.k1},
          {"k2", s.k2},
          {"depth", s.depth},
          {"w1", params.w1},
          {"b1", params.b1},
          {"w2", params.w2},
          {"b2", params.b2},
          {"filter", FilterSpecToJson(params.filter)}};
}

ModelParams ModelParamsFromJson(const nlohmann::json& j) {
  ModelParams p;
  try {
    ModelShape& s = p.shape;
    s.arch = ParseArchitecture(j.at("arch").get<std::string>());
    s.order = ParsePropagationOrder(j.value("order", std::string("decoupled")));
    s.in_dim = j.at("in_dim").get<std::size_t>();
    s.hidden_dim = j.at("hidden_dim").get<std::size_t>();
    s.out_dim = j.at("out_dim").get<std::size_t>();
    s.k1 = j.at("k1").get<int>();
    s.k2 = j.at("k2").get<int>();
    s.depth = j.at("depth").get<int>();
    p.w1 = j.at("w1").get<std::vector<double>>();
    p.b1 = j.at("b1").get<std::vector<double>>();
    p.w2 = j.at("w2").get<std::vector<double>>();
    p.b2 = j.at("b2").get<std::vector<double>>();
    p.filter = FilterSpecFromJson(j.at("filter"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("checkpoint: ") + e.what());
  }
  const ModelShape& s = p.shape;
  if (p.w1.size() != s.in_dim * s.hidden_dim ||
      p.w2.size() != s.hidden_dim * s.out_dim ||
      p.b1.size() != s.hidden_dim || p.b2.size() != s.out_dim) {
    throw Error(ErrorCode::kConfig, "checkpoint parameter sizes disagree with shape");
  }
  return p;
}

}  // namespace gsc
