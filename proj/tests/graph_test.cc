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
#include <sstream>
#include <vector>

#include "gmock/gmock.h"
#include "gsc/dense.h"
#include "gsc/error.h"
#include "gsc/graph.h"
#include "gtest/gtest.h"
#include "testing/random.h"

namespace gsc {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

std::vector<int> Neighbors(const SparseGraph& g, std::size_t i) {
  const auto row = g.neighbors(i);
  return {row.begin(), row.end()};
}

FeatureMatrix Col(std::initializer_list<double> v) {
  return FeatureMatrix::Column(std::vector<double>(v));
}

void ExpectNear(const FeatureMatrix& a, const FeatureMatrix& b, double tol) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a.values()[i], b.values()[i], tol) << "entry " << i;
  }
}

TEST(BuildCsrTest, SingleEdge) {
  const std::vector<Edge> edges = {{0, 1}};
  const SparseGraph g = BuildCsr(edges, 2);
  EXPECT_EQ(g.num_nodes(), 2u);
  EXPECT_THAT(g.degrees(), ElementsAre(1.0, 1.0));
  EXPECT_EQ(g.num_undirected_edges(), 1u);
  EXPECT_TRUE(g.HasEdge(1, 0));
}

TEST(BuildCsrTest, DuplicateReverseEdgeIsDeduplicated) {
  const std::vector<Edge> once = {{0, 1}};
  const std::vector<Edge> twice = {{0, 1}, {1, 0}, {0, 1}};
  const SparseGraph a = BuildCsr(once, 2);
  const SparseGraph b = BuildCsr(twice, 2);
  EXPECT_EQ(a.nnz(), b.nnz());
  EXPECT_EQ(a.Hash(), b.Hash());
  EXPECT_THAT(b.degrees(), ElementsAre(1.0, 1.0));
}

TEST(BuildCsrTest, PathDegrees) {
  const SparseGraph g = testing::PathGraph(3);
  EXPECT_THAT(g.degrees(), ElementsAre(1.0, 2.0, 1.0));
  EXPECT_THAT(Neighbors(g, 1), ElementsAre(0, 2));
}

TEST(BuildCsrTest, SelfLoopStoredOnce) {
  const std::vector<Edge> edges = {{0, 0}, {0, 0}, {0, 1}};
  const SparseGraph g = BuildCsr(edges, 2);
  EXPECT_EQ(g.num_self_loops(), 1u);
  EXPECT_THAT(Neighbors(g, 0), ElementsAre(0, 1));
  EXPECT_THAT(g.degrees(), ElementsAre(2.0, 1.0));
  EXPECT_EQ(g.num_undirected_edges(), 1u);
}

TEST(BuildCsrTest, OutOfRangeEndpointThrows) {
  const std::vector<Edge> edges = {{0, 2}};
  try {
    BuildCsr(edges, 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
  const std::vector<Edge> negative = {{-1, 0}};
  EXPECT_THROW(BuildCsr(negative, 2), Error);
}

TEST(BuildCsrTest, RowsSortedAndSymmetric) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const SparseGraph g = testing::RandomGraphWithLoops(rng, 30, 0.2, 0.3);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
      const auto row = g.neighbors(i);
      for (std::size_t k = 1; k < row.size(); ++k) EXPECT_LT(row[k - 1], row[k]);
      for (int j : row) EXPECT_TRUE(g.HasEdge(j, static_cast<int>(i)));
      EXPECT_EQ(g.degree(i), static_cast<double>(row.size()));
    }
  }
}

TEST(GraphTest, ComponentsAndIsolated) {
  const std::vector<Edge> edges = {{0, 1}, {2, 3}};
  const SparseGraph g = BuildCsr(edges, 5);
  EXPECT_EQ(g.CountComponents(), 3u);
  EXPECT_EQ(g.num_isolated(), 1u);
  EXPECT_EQ(g.inv_sqrt_degrees()[4], 0.0);
}

TEST(GraphTest, WithSelfLoopsAddsOnePerNode) {
  const SparseGraph g = testing::PathGraph(3).WithSelfLoops();
  EXPECT_TRUE(g.HasAllSelfLoops());
  EXPECT_THAT(g.degrees(), ElementsAre(2.0, 3.0, 2.0));
  EXPECT_EQ(g.WithSelfLoops().Hash(), g.Hash());
}

TEST(LaplacianTest, ConstantVectorOnK2IsInKernel) {
  ExpectNear(ApplyLaplacian(testing::CompleteGraph(2), Col({1, 1})),
             Col({0, 0}), 0.0);
}

TEST(LaplacianTest, UnitVectorOnK2) {
  ExpectNear(ApplyLaplacian(testing::CompleteGraph(2), Col({1, 0})),
             Col({1, -1}), 1e-15);
}

TEST(LaplacianTest, UnitVectorOnPath) {
  ExpectNear(ApplyLaplacian(testing::PathGraph(3), Col({1, 0, 0})),
             Col({1, -1 / std::sqrt(2.0), 0}), 1e-15);
}

TEST(LaplacianTest, IsolatedNodeActsAsIdentity) {
  const std::vector<Edge> edges = {{0, 1}};
  const SparseGraph g = BuildCsr(edges, 3);
  ExpectNear(ApplyLaplacian(g, Col({1, 0, 5})), Col({1, -1, 5}), 1e-15);
  ExpectNear(ApplyShifted(g, Col({1, 0, 5})), Col({1, 1, 5}), 1e-15);
}

TEST(LaplacianTest, IsolatedNodeRejectedUnderRejectPolicy) {
  const std::vector<Edge> edges = {{0, 1}};
  const SparseGraph g = BuildCsr(edges, 3);
  try {
    ApplyLaplacian(g, Col({1, 0, 5}), IsolatedNodePolicy::kReject);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateInput);
  }
  EXPECT_THROW(ApplyShifted(g, Col({1, 0, 5}), IsolatedNodePolicy::kReject),
               Error);
}

TEST(LaplacianTest, ShapeMismatchThrows) {
  EXPECT_THROW(ApplyLaplacian(testing::PathGraph(3), Col({1, 0})), Error);
}

TEST(LaplacianTest, MatchesDenseOracle) {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const SparseGraph g = testing::RandomGraphWithLoops(rng, 25, 0.15, 0.2);
    const FeatureMatrix x = testing::RandomMatrix(rng, 25, 3);
    ExpectNear(ApplyLaplacian(g, x), Multiply(DenseLaplacian(g), x), 1e-12);
    ExpectNear(ApplyShifted(g, x), Multiply(DenseShifted(g), x), 1e-12);
    ExpectNear(ApplyGcnNorm(g, x), Multiply(DenseGcnNorm(g), x), 1e-12);
  }
}

TEST(ShiftedTest, UnitVectorOnK2) {
  ExpectNear(ApplyShifted(testing::CompleteGraph(2), Col({1, 0})),
             Col({1, 1}), 1e-15);
}

TEST(ShiftedTest, ConstantVectorOnK2) {
  ExpectNear(ApplyShifted(testing::CompleteGraph(2), Col({1, 1})),
             Col({2, 2}), 1e-15);
}

TEST(ShiftedTest, MiddleVectorOnPath) {
  const double r = 1 / std::sqrt(2.0);
  ExpectNear(ApplyShifted(testing::PathGraph(3), Col({0, 1, 0})),
             Col({r, 1, r}), 1e-15);
}

TEST(ShiftedTest, SumWithLaplacianIsTwiceInput) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const SparseGraph g = testing::RandomGraph(rng, 30, 0.2);
    const FeatureMatrix x = testing::RandomMatrix(rng, 30, 2);
    FeatureMatrix sum = ApplyLaplacian(g, x);
    sum.AddScaled(ApplyShifted(g, x), 1.0);
    FeatureMatrix twice = x;
    twice.AddScaled(x, 1.0);
    ExpectNear(sum, twice, 1e-12);
  }
}

TEST(GcnNormTest, ConstantPreservedOnK2WithLoops) {
  const SparseGraph g = testing::CompleteGraph(2).WithSelfLoops();
  ExpectNear(ApplyGcnNorm(g, Col({1, 1})), Col({1, 1}), 1e-15);
  // Existing loops are not doubled, so the loop-free graph gives the same.
  ExpectNear(ApplyGcnNorm(testing::CompleteGraph(2), Col({1, 1})),
             Col({1, 1}), 1e-15);
}

TEST(GcnNormTest, SingleIsolatedNode) {
  const SparseGraph g = BuildCsr({}, 1);
  ExpectNear(ApplyGcnNorm(g, Col({5})), Col({5}), 0.0);
}

TEST(GcnNormTest, UnitVectorOnPath) {
  ExpectNear(ApplyGcnNorm(testing::PathGraph(3), Col({1, 0, 0})),
             Col({0.5, 1 / std::sqrt(6.0), 0}), 1e-15);
}

TEST(GcnNormTest, ConstantPreservedOnRegularGraph) {
  const SparseGraph g = testing::CycleGraph(7);
  ExpectNear(ApplyGcnNorm(g, FeatureMatrix(7, 2, 3.0)), FeatureMatrix(7, 2, 3.0),
             1e-14);
}

TEST(PermuteGraphTest, IdentityPermutation) {
  Rng rng(1);
  const SparseGraph g = testing::RandomGraph(rng, 12, 0.3);
  const FeatureMatrix x = testing::RandomMatrix(rng, 12, 2);
  std::vector<int> id(12);
  for (int i = 0; i < 12; ++i) id[i] = i;
  const PermutedGraph p = PermuteGraph(g, x, id);
  EXPECT_EQ(p.graph.Hash(), g.Hash());
  EXPECT_EQ(p.features, x);
}

TEST(PermuteGraphTest, SwapOnK2KeepsAdjacency) {
  const SparseGraph g = testing::CompleteGraph(2);
  const std::vector<int> swap = {1, 0};
  const PermutedGraph p = PermuteGraph(g, Col({1, 2}), swap);
  EXPECT_EQ(p.graph.Hash(), g.Hash());
  EXPECT_EQ(p.features, Col({2, 1}));
}

TEST(PermuteGraphTest, InverseRestoresOriginalBitExact) {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const SparseGraph g = testing::RandomGraphWithLoops(rng, 20, 0.2, 0.2);
    const FeatureMatrix x = testing::RandomMatrix(rng, 20, 3);
    const std::vector<int> perm = testing::RandomPermutation(rng, 20);
    const PermutedGraph there = PermuteGraph(g, x, perm);
    const PermutedGraph back =
        PermuteGraph(there.graph, there.features, InversePermutation(perm));
    EXPECT_EQ(back.graph.Hash(), g.Hash());
    EXPECT_EQ(back.features, x);
  }
}

TEST(PermuteGraphTest, MovesEdgesAndRows) {
  const SparseGraph g = testing::PathGraph(3);  // 0-1-2
  const std::vector<int> perm = {2, 0, 1};       // 0->2, 1->0, 2->1
  const PermutedGraph p = PermuteGraph(g, Col({10, 11, 12}), perm);
  EXPECT_TRUE(p.graph.HasEdge(2, 0));
  EXPECT_TRUE(p.graph.HasEdge(0, 1));
  EXPECT_FALSE(p.graph.HasEdge(2, 1));
  EXPECT_EQ(p.features, Col({11, 12, 10}));
}

TEST(PermuteGraphTest, NonBijectionThrows) {
  const SparseGraph g = testing::PathGraph(3);
  const std::vector<int> bad = {0, 0, 1};
  EXPECT_THROW(PermuteGraph(g, Col({1, 2, 3}), bad), Error);
  const std::vector<int> short_perm = {0, 1};
  EXPECT_THROW(PermuteGraph(g, Col({1, 2, 3}), short_perm), Error);
  const std::vector<int> out_of_range = {0, 1, 3};
  EXPECT_THROW(ValidatePermutation(out_of_range, 3), Error);
}

TEST(EdgeListTest, ParsesCommentsAndSeparators) {
  std::istringstream in("# header\n0 1\n1,2  # trailing\n\n2\t0\n");
  const EdgeList list = ParseEdgeList(in);
  ASSERT_EQ(list.edges.size(), 3u);
  EXPECT_EQ(list.edges[1], (Edge{1, 2}));
  EXPECT_THAT(list.lines, ElementsAre(2u, 3u, 5u));
  EXPECT_EQ(list.min_nodes, 3u);
}

TEST(EdgeListTest, MalformedLineReportsLineNumber) {
  std::istringstream in("0 1\n1 x\n");
  try {
    ParseEdgeList(in);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDataFormat);
    EXPECT_EQ(e.line(), 2u);
    EXPECT_THAT(e.what(), HasSubstr("line 2"));
  }
  std::istringstream three("0 1 2\n");
  EXPECT_THROW(ParseEdgeList(three), Error);
  std::istringstream negative("0 -1\n");
  EXPECT_THROW(ParseEdgeList(negative), Error);
}

TEST(EdgeListTest, WriteThenParseRoundTrips) {
  Rng rng(9);
  const SparseGraph g = testing::RandomGraphWithLoops(rng, 15, 0.3, 0.2);
  std::stringstream buf;
  WriteEdgeList(g, buf);
  const EdgeList list = ParseEdgeList(buf);
  EXPECT_EQ(BuildCsr(list.edges, 15).Hash(), g.Hash());
}

}  // namespace
}  // namespace gsc
