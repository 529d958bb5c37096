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

#include <cmath>
#include <vector>

#include "gsc/dense.h"
#include "gsc/error.h"
#include "gsc/poly_basis.h"
#include "gsc/verify.h"
#include "gtest/gtest.h"
#include "testing/random.h"

namespace gsc {
namespace {

FeatureMatrix Col(std::initializer_list<double> v) {
  return FeatureMatrix::Column(std::vector<double>(v));
}

TEST(BasisCacheTest, DegreeZeroHoldsInputTwice) {
  const FeatureMatrix x = Col({1, 2, 3});
  const BasisCache cache = BuildBasisCache(testing::PathGraph(3), x, 0, 0);
  EXPECT_EQ(cache.k1(), 0);
  EXPECT_EQ(cache.k2(), 0);
  EXPECT_EQ(cache.positive(0), x);
  EXPECT_EQ(cache.negative(0), x);
}

TEST(BasisCacheTest, FirstShiftedBlockOnK2) {
  const BasisCache cache =
      BuildBasisCache(testing::CompleteGraph(2), Col({1, 0}), 1, 0);
  EXPECT_EQ(cache.positive(1), Col({1, 1}));
}

TEST(BasisCacheTest, BlocksFollowTheRecurrence) {
  Rng rng(4);
  const SparseGraph g = testing::RandomGraph(rng, 20, 0.2);
  const FeatureMatrix x = testing::RandomMatrix(rng, 20, 3);
  const BasisCache cache = BuildBasisCache(g, x, 4, 4);
  ASSERT_EQ(cache.k1(), 4);
  ASSERT_EQ(cache.k2(), 4);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(cache.positive(i + 1), ApplyShifted(g, cache.positive(i)));
    EXPECT_EQ(cache.negative(i + 1), ApplyLaplacian(g, cache.negative(i)));
  }
}

TEST(BasisCacheTest, BlocksMatchDensePowers) {
  Rng rng(6);
  const SparseGraph g = testing::RandomGraph(rng, 20, 0.25);
  const FeatureMatrix x = testing::RandomMatrix(rng, 20, 2);
  const BasisCache cache = BuildBasisCache(g, x, 4, 4);
  for (int k = 0; k <= 4; ++k) {
    EXPECT_LE(RelativeFrobeniusError(
                  cache.positive(k),
                  Multiply(DenseMatrixPower(g, OperatorTag::kShifted, k), x)),
              1e-10);
    EXPECT_LE(RelativeFrobeniusError(
                  cache.negative(k),
                  Multiply(DenseMatrixPower(g, OperatorTag::kLaplacian, k), x)),
              1e-10);
  }
}

TEST(BasisCacheTest, RecordsProvenance) {
  const SparseGraph g = testing::PathGraph(3);
  const FeatureMatrix x = Col({1, 2, 3});
  const BasisCache cache = BuildBasisCache(g, x, 2, 1);
  EXPECT_EQ(cache.provenance().graph_hash, g.Hash());
  EXPECT_EQ(cache.provenance().feature_hash, HashValues(x));
  EXPECT_EQ(cache.provenance().k1, 2);
  EXPECT_EQ(cache.provenance().k2, 1);
}

TEST(BasisCacheTest, NegativeDegreeThrows) {
  EXPECT_THROW(BuildBasisCache(testing::PathGraph(3), Col({1, 2, 3}), -1, 0),
               Error);
}

TEST(GscCombineTest, IdentityFilter) {
  const FeatureMatrix x = Col({1, 2, 3});
  const BasisCache cache = BuildBasisCache(testing::PathGraph(3), x, 2, 2);
  FilterSpec spec;
  spec.alpha = {1};
  EXPECT_EQ(GscCombine(cache, spec), x);
}

TEST(GscCombineTest, OperatorsCancelOnK2) {
  const BasisCache cache =
      BuildBasisCache(testing::CompleteGraph(2), Col({1, 0}), 1, 1);
  const FilterSpec spec{{1, 1}, {0, 1}};
  const FeatureMatrix z = GscCombine(cache, spec);
  EXPECT_NEAR(z(0, 0), 3.0, 1e-15);
  EXPECT_NEAR(z(1, 0), 0.0, 1e-15);
}

TEST(GscCombineTest, OperatorsCancelOnPath) {
  const BasisCache cache =
      BuildBasisCache(testing::PathGraph(3), Col({0, 1, 0}), 1, 1);
  const FilterSpec spec{{0, 1}, {0, 1}};
  const FeatureMatrix z = GscCombine(cache, spec);
  EXPECT_NEAR(z(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(z(1, 0), 2.0, 1e-15);
  EXPECT_NEAR(z(2, 0), 0.0, 1e-15);
}

TEST(GscCombineTest, DegreeBeyondCacheThrows) {
  const BasisCache cache =
      BuildBasisCache(testing::PathGraph(3), Col({1, 2, 3}), 1, 1);
  try {
    GscCombine(cache, FilterSpec::Uniform(2, 1));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

TEST(GscCombineTest, MatchesSpectralOracle) {
  Rng rng(8);
  const SparseGraph g = testing::RandomGraph(rng, 30, 0.15);
  const FeatureMatrix x = testing::RandomMatrix(rng, 30, 2);
  const FilterSpec spec{{0.5, -1.0, 0.25}, {2.0, 0.0, -0.5, 0.125}};
  const FeatureMatrix sparse = GscCombine(BuildBasisCache(g, x, 2, 3), spec);
  const auto h = [](double l) {
    return 0.5 - (2 - l) + 0.25 * (2 - l) * (2 - l) + 2.0 - 0.5 * l * l +
           0.125 * l * l * l;
  };
  EXPECT_LE(RelativeFrobeniusError(sparse,
                                   SpectralFilterOracle(DenseEigensystem(g), h, x)),
            1e-8);
}

TEST(FilterSpecTest, UniformAndDegrees) {
  const FilterSpec spec = FilterSpec::Uniform(2, 1);
  EXPECT_EQ(spec.alpha, (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(spec.beta, (std::vector<double>{1, 1}));
  EXPECT_EQ(FilterSpec::Uniform(-1, 0).k1(), -1);
}

TEST(FilterSpecTest, JsonRoundTrip) {
  const FilterSpec spec{{0.1, -2.5}, {3.0}};
  const nlohmann::json j = FilterSpecToJson(spec);
  EXPECT_EQ(j.at("k1"), 1);
  EXPECT_EQ(j.at("k2"), 0);
  EXPECT_EQ(FilterSpecFromJson(j), spec);
}

TEST(FilterSpecTest, JsonLengthMismatchIsConfigError) {
  const nlohmann::json j = {{"k1", 2}, {"k2", 0}, {"alpha", {1, 2}},
                            {"beta", {1}}};
  try {
    FilterSpecFromJson(j);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
  EXPECT_THROW(FilterSpecFromJson(nlohmann::json{{"k1", 0}}), Error);
}

TEST(BernsteinTermTest, OrderOneReducesToSingleOperators) {
  Rng rng(12);
  const SparseGraph g = testing::RandomGraph(rng, 10, 0.3);
  const FeatureMatrix x = testing::RandomMatrix(rng, 10, 2);
  EXPECT_EQ(BernsteinTerm(g, x, 1, 0), ApplyShifted(g, x));
  EXPECT_EQ(BernsteinTerm(g, x, 1, 1), ApplyLaplacian(g, x));
}

TEST(BernsteinTermTest, MatchesDenseProduct) {
  Rng rng(13);
  const SparseGraph g = testing::RandomGraph(rng, 15, 0.25);
  const FeatureMatrix x = testing::RandomMatrix(rng, 15, 2);
  const DenseMatrix op = Multiply(DenseMatrixPower(g, OperatorTag::kShifted, 1),
                                  DenseMatrixPower(g, OperatorTag::kLaplacian, 2));
  EXPECT_LE(MaxAbsDiff(BernsteinTerm(g, x, 3, 2), Multiply(op, x)), 1e-10);
}

TEST(BernsteinTermTest, OutOfRangeThrows) {
  const FeatureMatrix x = Col({1, 2, 3});
  EXPECT_THROW(BernsteinTerm(testing::PathGraph(3), x, 2, 3), Error);
  EXPECT_THROW(BernsteinTerm(testing::PathGraph(3), x, 2, -1), Error);
}

TEST(MonomialPropagateTest, Examples) {
  const FeatureMatrix x = Col({1, 2, 3});
  EXPECT_EQ(MonomialPropagate(testing::PathGraph(3), x, 0), x);
  const FeatureMatrix ones = Col({1, 1});
  const FeatureMatrix z =
      MonomialPropagate(testing::CompleteGraph(2).WithSelfLoops(), ones, 1);
  EXPECT_NEAR(z(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(z(1, 0), 1.0, 1e-15);
}

TEST(MonomialPropagateTest, MatchesDensePower) {
  Rng rng(14);
  const SparseGraph g = testing::RandomGraph(rng, 12, 0.3);
  const FeatureMatrix x = testing::RandomMatrix(rng, 12, 2);
  EXPECT_LE(MaxAbsDiff(MonomialPropagate(g, x, 3),
                       Multiply(DenseMatrixPower(g, OperatorTag::kGcnNorm, 3), x)),
            1e-10);
}

}  // namespace
}  // namespace gsc
