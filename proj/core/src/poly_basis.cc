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

#include "gsc/poly_basis.h"

#include <string>

#include "gsc/error.h"

namespace gsc {

FilterSpec FilterSpec::Uniform(int k1, int k2, double value) {
  FilterSpec spec;
  spec.alpha.assign(static_cast<std::size_t>(k1 + 1), value);
  spec.beta.assign(static_cast<std::size_t>(k2 + 1), value);
  return spec;
}

nlohmann::json FilterSpecToJson(const FilterSpec& spec) {
  return {{"k1", spec.k1()},
          {"k2", spec.k2()},
          {"alpha", spec.alpha},
          {"beta", spec.beta}};
}

FilterSpec FilterSpecFromJson(const nlohmann::json& j) {
  FilterSpec spec;
  try {
    const int k1 = j.at("k1").get<int>();
    const int k2 = j.at("k2").get<int>();
    spec.alpha = j.at("alpha").get<std::vector<double>>();
    spec.beta = j.at("beta").get<std::vector<double>>();
    if (spec.k1() != k1 || spec.k2() != k2) {
      throw Error(ErrorCode::kConfig,
                  "filter spec: alpha/beta lengths must equal k1+1 and k2+1");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("filter spec: ") + e.what());
  }
  return spec;
}

BasisCache BuildBasisCache(const SparseGraph& g, const FeatureMatrix& x,
                           int k1, int k2) {
  if (k1 < 0 || k2 < 0) {
    throw Error(ErrorCode::kInvalidInput, "basis degrees must be >= 0");
  }
  BasisCache cache;
  cache.positive_.resize(k1 + 1);
  cache.negative_.resize(k2 + 1);
  cache.positive_[0] = x;
  cache.negative_[0] = x;
  for (int i = 1; i <= k1; ++i) {
    ApplyShiftedTo(g, cache.positive_[i - 1], cache.positive_[i]);
  }
  for (int j = 1; j <= k2; ++j) {
    ApplyLaplacianTo(g, cache.negative_[j - 1], cache.negative_[j]);
  }
  cache.provenance_ = {g.Hash(), HashValues(x), k1, k2};
  return cache;
}

FeatureMatrix GscCombine(const BasisCache& cache, const FilterSpec& spec) {
  if (spec.k1() > cache.k1() || spec.k2() > cache.k2()) {
    throw Error(ErrorCode::kInvalidInput,
                "filter degrees (" + std::to_string(spec.k1()) + ", " +
                    std::to_string(spec.k2()) + ") exceed cache degrees (" +
                    std::to_string(cache.k1()) + ", " +
                    std::to_string(cache.k2()) + ")");
  }
  const FeatureMatrix& x = cache.positive(0);
  FeatureMatrix z(x.rows(), x.cols());
  for (std::size_t i = 0; i < spec.alpha.size(); ++i) {
    z.AddScaled(cache.positive(static_cast<int>(i)), spec.alpha[i]);
  }
  for (std::size_t j = 0; j < spec.beta.size(); ++j) {
    z.AddScaled(cache.negative(static_cast<int>(j)), spec.beta[j]);
  }
  return z;
}

FeatureMatrix BernsteinTerm(const SparseGraph& g, const FeatureMatrix& x,
                            int order, int k) {
  if (order < 0 || k < 0 || k > order) {
    throw Error(ErrorCode::kInvalidInput,
                "Bernstein index k=" + std::to_string(k) +
                    " outside [0, " + std::to_string(order) + "]");
  }
  FeatureMatrix cur = x;
  FeatureMatrix next;
  for (int i = 0; i < k; ++i) {
    ApplyLaplacianTo(g, cur, next);
    std::swap(cur, next);
  }
  for (int i = 0; i < order - k; ++i) {
    ApplyShiftedTo(g, cur, next);
    std::swap(cur, next);
  }
  return cur;
}

FeatureMatrix MonomialPropagate(const SparseGraph& g, const FeatureMatrix& x,
                                int k) {
  if (k < 0) throw Error(ErrorCode::kInvalidInput, "negative power");
  FeatureMatrix cur = x;
  FeatureMatrix next;
  for (int i = 0; i < k; ++i) {
    ApplyGcnNormTo(g, cur, next);
    std::swap(cur, next);
  }
  return cur;
}

}  // namespace gsc
