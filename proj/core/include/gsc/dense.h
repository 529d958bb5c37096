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

#ifndef GSC_DENSE_H_
#define GSC_DENSE_H_

#include <cstddef>

#include "gsc/feature_matrix.h"
#include "gsc/graph.h"

namespace gsc {

// Square or rectangular dense matrices share FeatureMatrix storage.
using DenseMatrix = FeatureMatrix;

DenseMatrix Multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix Transpose(const DenseMatrix& a);
DenseMatrix Add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix Scale(const DenseMatrix& a, double s);

// Largest n the dense oracles accept.
inline constexpr std::size_t kDenseOracleMaxNodes = 500;

// Dense builders straight from the definitions. Degrees are recomputed from
// the dense adjacency rather than taken from the graph, so these stay
// independent of the sparse operators they check. Isolated nodes follow the
// identity policy.
DenseMatrix DenseAdjacency(const SparseGraph& g);
DenseMatrix DenseNormalizedAdjacency(const SparseGraph& g);
DenseMatrix DenseLaplacian(const SparseGraph& g);
DenseMatrix DenseShifted(const SparseGraph& g);
DenseMatrix DenseGcnNorm(const SparseGraph& g);

}  // namespace gsc

#endif  // GSC_DENSE_H_
