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

#include "gmock/gmock.h"
#include "gsc/dense.h"
#include "gsc/error.h"
#include "gsc/pnca.h"
#include "gsc/verify.h"
#include "gtest/gtest.h"
#include "testing/random.h"

namespace gsc {
namespace {

using ::testing::ElementsAre;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kInvalidInput;
}

FeatureMatrix ThreeRows() {
  return FeatureMatrix::FromRows({{1, 2}, {10, 20}, {100, 200}});
}

TEST(NodeActivationTest, IdentityCase) {
  const SparseGraph g = testing::PathGraph(3);
  NodeActivationSpec spec{0, 1, 1.0, {{1, 0.0}}};
  EXPECT_THAT(NodeActivation(ThreeRows(), g, spec), ElementsAre(1, 2));
}

TEST(NodeActivationTest, EdgeSum) {
  const SparseGraph g = testing::CompleteGraph(2);
  const FeatureMatrix x = FeatureMatrix::FromRows({{1, 2}, {10, 20}});
  NodeActivationSpec spec{0, 1, 1.0, {{1, 1.0}}};
  EXPECT_THAT(NodeActivation(x, g, spec), ElementsAre(11, 22));
}

TEST(NodeActivationTest, TwoHopSum) {
  const SparseGraph g = testing::PathGraph(3);
  NodeActivationSpec spec{0, 2, 2.0, {{1, 1.0}, {2, 1.0}}};
  EXPECT_THAT(NodeActivation(ThreeRows(), g, spec), ElementsAre(112, 224));
}

TEST(NodeActivationTest, NonNeighborThrows) {
  const SparseGraph g = testing::PathGraph(3);
  NodeActivationSpec spec{0, 1, 1.0, {{2, 1.0}}};
  EXPECT_EQ(CodeOf([&] { NodeActivation(ThreeRows(), g, spec); }),
            ErrorCode::kInvalidInput);
  NodeActivationSpec negative_self{0, 1, -1.0, {{1, 1.0}}};
  EXPECT_EQ(CodeOf([&] { NodeActivation(ThreeRows(), g, negative_self); }),
            ErrorCode::kInvalidInput);
}

TEST(NodeActivationTest, FullNeighborhoodSpecCoversHops) {
  const SparseGraph g = testing::PathGraph(5);
  const NodeActivationSpec spec = FullNeighborhoodSpec(g, 2, 1, 1.0, 0.5);
  ASSERT_EQ(spec.neighbors.size(), 2u);
  EXPECT_EQ(FullNeighborhoodSpec(g, 0, 4, 1.0, 0.5).neighbors.size(), 4u);
  EXPECT_THAT(HopDistances(g, 0, 2), ElementsAre(0, 1, 2, -1, -1));
}

TEST(ClassifyNodeActivationTest, PositiveWithZeroNeighbor) {
  NodeActivationSpec spec{0, 1, 1.0, {{1, 1.0}, {2, 0.0}}};
  EXPECT_TRUE(ClassifyNodeActivation(spec).positive());
}

TEST(ClassifyNodeActivationTest, NegativeCoefficient) {
  NodeActivationSpec spec{0, 1, 1.0, {{1, -1.0}}};
  const ActivationClass c = ClassifyNodeActivation(spec);
  EXPECT_FALSE(c.positive());
  EXPECT_FALSE(c.reason.empty());
}

TEST(ClassifyNodeActivationTest, ZeroSelfCoefficient) {
  NodeActivationSpec spec{0, 1, 0.0, {{1, 1.0}}};
  EXPECT_FALSE(ClassifyNodeActivation(spec).positive());
}

TEST(ClassifyNodeActivationTest, AllZeroIsNegativeAndFlagged) {
  NodeActivationSpec spec{0, 1, 0.0, {{1, 0.0}}};
  const ActivationClass c = ClassifyNodeActivation(spec);
  EXPECT_FALSE(c.positive());
  EXPECT_TRUE(c.all_zero);
}

TEST(ClassifyGraphActivationTest, ShiftedOnK2IsPositive) {
  const SparseGraph g = testing::CompleteGraph(2);
  EXPECT_TRUE(ClassifyGraphActivation(DenseShifted(g), g.WithSelfLoops())
                  .positive());
}

TEST(ClassifyGraphActivationTest, LaplacianOnK2IsNegative) {
  const SparseGraph g = testing::CompleteGraph(2);
  const ActivationClass c =
      ClassifyGraphActivation(DenseLaplacian(g), g.WithSelfLoops());
  EXPECT_FALSE(c.positive());
  ASSERT_TRUE(c.witness.has_value());
  EXPECT_EQ(*c.witness, (ActivationWitness{0, 1}));
}

TEST(ClassifyGraphActivationTest, SquaredShiftedOnPathIsTwoStepPositive) {
  const SparseGraph g = testing::PathGraph(3);
  const DenseMatrix t = DenseMatrixPower(g, OperatorTag::kShifted, 2);
  EXPECT_GT(t(0, 2), 0.0);
  EXPECT_TRUE(ClassifyGraphActivation(t, g.WithSelfLoops(), 2).positive());
  // Read literally as a one-step activation, the 2-hop entry breaks support.
  const ActivationClass literal = ClassifyGraphActivation(t, g.WithSelfLoops());
  EXPECT_FALSE(literal.positive());
  EXPECT_EQ(*literal.witness, (ActivationWitness{0, 2}));
}

TEST(ClassifyGraphActivationTest, ZeroMatrixIsNegativeAndFlagged) {
  const SparseGraph g = testing::CompleteGraph(2).WithSelfLoops();
  const ActivationClass c = ClassifyGraphActivation(DenseMatrix(2, 2), g);
  EXPECT_FALSE(c.positive());
  EXPECT_TRUE(c.all_zero);
}

TEST(ClassifyGraphActivationTest, IdentityIsNegativeOnGraphWithEdges) {
  // Identity is the beta = (1, 0, ...) negative-branch polynomial.
  const SparseGraph g = testing::PathGraph(3);
  EXPECT_FALSE(ClassifyGraphActivation(DenseMatrix::Identity(3),
                                       g.WithSelfLoops())
                   .positive());
}

TEST(ClassifyGraphActivationTest, Errors) {
  const SparseGraph g = testing::PathGraph(3);
  EXPECT_EQ(CodeOf([&] { ClassifyGraphActivation(DenseShifted(g), g); }),
            ErrorCode::kInvalidInput);
  EXPECT_EQ(CodeOf([&] {
              ClassifyGraphActivation(DenseMatrix(2, 2), g.WithSelfLoops());
            }),
            ErrorCode::kInvalidInput);
  const SparseGraph big = BuildCsr({}, kClassifyMaxNodes + 1).WithSelfLoops();
  EXPECT_EQ(CodeOf([&] { ClassifyGraphActivation(DenseMatrix(1, 1), big); }),
            ErrorCode::kSizeGuard);
}

TEST(PositiveCombinationTest, ShiftedPlusIdentityOnK2) {
  const std::vector<double> alpha = {1, 1};
  EXPECT_TRUE(
      CheckPositiveCombination(alpha, testing::CompleteGraph(2)).positive());
}

TEST(PositiveCombinationTest, IdentityAloneIsNegative) {
  const std::vector<double> alpha = {1, 0};
  EXPECT_FALSE(
      CheckPositiveCombination(alpha, testing::PathGraph(4)).positive());
}

TEST(PositiveCombinationTest, RandomConnectedGraphsAcrossSeeds) {
  const std::vector<double> alpha = {0.3, 0.7, 0.1};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const SparseGraph g = testing::RandomConnectedGraph(rng, 20, 0.1);
    EXPECT_TRUE(CheckPositiveCombination(alpha, g).positive()) << seed;
  }
}

TEST(PositiveCombinationTest, NegativeCoefficientViolatesContract) {
  const std::vector<double> alpha = {1, -0.5};
  EXPECT_EQ(CodeOf([&] {
              CheckPositiveCombination(alpha, testing::CompleteGraph(2));
            }),
            ErrorCode::kContractViolation);
}

TEST(LabelSmoothnessTest, Examples) {
  const SparseGraph triangle = testing::CompleteGraph(3);
  EXPECT_DOUBLE_EQ(LabelSmoothness(triangle, std::vector<int>{0, 0, 1}),
                   2.0 / 3.0);
  EXPECT_EQ(LabelSmoothness(triangle, std::vector<int>{4, 4, 4}), 0.0);
  EXPECT_EQ(LabelSmoothness(testing::CompleteGraph(2), std::vector<int>{0, 1}),
            1.0);
}

TEST(LabelSmoothnessTest, SelfLoopsExcluded) {
  const SparseGraph g = testing::CompleteGraph(2).WithSelfLoops();
  EXPECT_EQ(LabelSmoothness(g, std::vector<int>{0, 1}), 1.0);
}

TEST(LabelSmoothnessTest, NoEdgesIsDegenerate) {
  const std::vector<Edge> loops = {{0, 0}, {1, 1}};
  const SparseGraph g = BuildCsr(loops, 2);
  EXPECT_EQ(CodeOf([&] { LabelSmoothness(g, std::vector<int>{0, 1}); }),
            ErrorCode::kDegenerateInput);
}

TEST(RayleighQuotientTest, Examples) {
  const SparseGraph k2 = testing::CompleteGraph(2);
  EXPECT_NEAR(RayleighQuotient(k2, std::vector<double>{1, 1}), 0.0, 1e-15);
  EXPECT_NEAR(RayleighQuotient(k2, std::vector<double>{1, -1}), 2.0, 1e-15);
  EXPECT_NEAR(RayleighQuotient(testing::PathGraph(3),
                               std::vector<double>{1, 0, 0}),
              1.0, 1e-15);
}

TEST(RayleighQuotientTest, ZeroVectorThrows) {
  EXPECT_EQ(CodeOf([&] {
              RayleighQuotient(testing::PathGraph(3),
                               std::vector<double>{0, 0, 0});
            }),
            ErrorCode::kInvalidInput);
}

}  // namespace
}  // namespace gsc
