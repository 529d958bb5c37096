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

#ifndef GSC_POLY_BASIS_H_
#define GSC_POLY_BASIS_H_

#include <cstdint>
#include <vector>

#include "nlohmann/json.hpp"

#include "gsc/feature_matrix.h"
#include "gsc/graph.h"

namespace gsc {

// Coefficients of Z = (sum_i alpha_i (2I - L)^i + sum_j beta_j L^j) X.
// alpha[i] multiplies (2I - L)^i and beta[j] multiplies L^j. An empty
// vector drops that branch entirely; its degree then reads as -1.
struct FilterSpec {
  std::vector<double> alpha;
  std::vector<double> beta;

  int k1() const { return static_cast<int>(alpha.size()) - 1; }
  int k2() const { return static_cast<int>(beta.size()) - 1; }

  // All coefficients set to `value`.
  static FilterSpec Uniform(int k1, int k2, double value = 1.0);

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

// {"k1": int, "k2": int, "alpha": [...], "beta": [...]}
nlohmann::json FilterSpecToJson(const FilterSpec& spec);
// Throws kConfig when a length disagrees with its declared degree.
FilterSpec FilterSpecFromJson(const nlohmann::json& j);

struct BasisProvenance {
  std::uint64_t graph_hash = 0;
  std::uint64_t feature_hash = 0;
  int k1 = 0;
  int k2 = 0;
};

// Propagated feature blocks P_i = (2I - L)^i X, i = 0..k1, and
// Q_j = L^j X, j = 0..k2, built by one operator application per block.
class BasisCache {
 public:
  int k1() const { return static_cast<int>(positive_.size()) - 1; }
  int k2() const { return static_cast<int>(negative_.size()) - 1; }
  const FeatureMatrix& positive(int i) const { return positive_[i]; }
  const FeatureMatrix& negative(int j) const { return negative_[j]; }
  const BasisProvenance& provenance() const { return provenance_; }

  friend BasisCache BuildBasisCache(const SparseGraph& g,
                                    const FeatureMatrix& x, int k1, int k2);

 private:
  std::vector<FeatureMatrix> positive_;
  std::vector<FeatureMatrix> negative_;
  BasisProvenance provenance_;
};

// k1, k2 >= 0. Costs (k1 + k2) * nnz(A) * d multiply-adds.
BasisCache BuildBasisCache(const SparseGraph& g, const FeatureMatrix& x,
                           int k1, int k2);

// Z = sum_i alpha_i P_i + sum_j beta_j Q_j. Throws kInvalidInput when the
// spec needs a degree the cache lacks.
FeatureMatrix GscCombine(const BasisCache& cache, const FilterSpec& spec);

// (2I - L)^{K-k} L^k X, 0 <= k <= K.
FeatureMatrix BernsteinTerm(const SparseGraph& g, const FeatureMatrix& x,
                            int order, int k);

// (D-hat^{-1/2} A-hat D-hat^{-1/2})^k X; k = 0 is the identity.
FeatureMatrix MonomialPropagate(const SparseGraph& g, const FeatureMatrix& x,
                                int k);

}  // namespace gsc

#endif  // GSC_POLY_BASIS_H_
