// Copyright 2026 The paulest Authors
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

#include <gtest/gtest.h>

#include "paulest/subalgebra.hpp"

using namespace paulest;

TEST(Subalgebra, PresetsAreValid) {
  for (const char* name : {"M2-pauli", "M4-C2", "M4-mixed"}) {
    const auto d = preset_decomposition(name);
    ASSERT_TRUE(d.has_value()) << name;
    const auto basis = basis_for_dimension(d->dim);
    const auto report = validate_decomposition(*d, basis);
    EXPECT_TRUE(report.valid) << name << ": " << (report.issues.empty() ? "" : report.issues.front());
    EXPECT_TRUE(report.uniform);
    EXPECT_TRUE(report.dimension_count_holds);
  }
  EXPECT_FALSE(preset_decomposition("M8-nothing").has_value());
}

TEST(Subalgebra, DimensionCounting) {
  const auto c2 = m4_c2_decomposition();
  const auto r1 = validate_decomposition(c2, basis_for_dimension(4));
  EXPECT_EQ(r1.block_dimension, 2);
  EXPECT_EQ(r1.block_count, 15);
  const auto mixed = m4_mixed_decomposition();
  const auto r2 = validate_decomposition(mixed, basis_for_dimension(4));
  EXPECT_EQ(r2.block_dimension, 4);
  EXPECT_EQ(r2.block_count, 5);
}

TEST(Subalgebra, InferredKindsMatchTags) {
  const auto basis = basis_for_dimension(4);
  for (const auto& d : {m4_c2_decomposition(), m4_mixed_decomposition()}) {
    for (std::size_t b = 0; b < d.block_count(); ++b) EXPECT_EQ(infer_block_kind(d, basis, b), *d.kind(b)) << b;
  }
}

TEST(Subalgebra, BlockOfIndex) {
  const auto pi = m4_mixed_decomposition().block_of_index();
  EXPECT_EQ(pi[0], -1);
  EXPECT_EQ(pi[2], 0);
  EXPECT_EQ(pi[8], 1);
  EXPECT_EQ(pi[15], 2);
  EXPECT_EQ(pi[13], 3);
  EXPECT_EQ(pi[9], 4);
}

TEST(Subalgebra, DetectsOverlapAndGaps) {
  const auto basis = basis_for_dimension(2);
  SubalgebraDecomposition overlap{2, {{1, 2}, {2, 3}}, {}};
  auto r = validate_decomposition(overlap, basis);
  EXPECT_FALSE(r.valid);
  EXPECT_FALSE(r.disjoint);
  SubalgebraDecomposition gap{2, {{1}, {2}}, {}};
  r = validate_decomposition(gap, basis);
  EXPECT_FALSE(r.valid);
  EXPECT_FALSE(r.covers);
  SubalgebraDecomposition out_of_range{2, {{1}, {2}, {4}}, {}};
  r = validate_decomposition(out_of_range, basis);
  EXPECT_FALSE(r.in_range);
}

TEST(Subalgebra, DetectsNonClosedBlock) {
  // (I x X)(X x I) = X x X lies outside span{I, I x X, X x I}.
  SubalgebraDecomposition d;
  d.dim = 4;
  d.blocks = {{1, 4}, {2, 8}, {3, 12}, {5, 10, 15}, {6, 11, 13}, {7, 14, 9}};
  const auto r = validate_decomposition(d, basis_for_dimension(4));
  EXPECT_FALSE(r.valid);
  EXPECT_FALSE(r.closed);
  EXPECT_TRUE(r.disjoint);
  EXPECT_TRUE(r.covers);
}

TEST(Subalgebra, MinimalProjectionRank) {
  EXPECT_EQ(minimal_projection_rank(BlockKind::commutative(4), 4), 1);
  EXPECT_EQ(minimal_projection_rank(BlockKind::commutative(2), 4), 2);
  EXPECT_EQ(minimal_projection_rank(BlockKind::full_matrix(2), 4), 2);
  EXPECT_EQ(minimal_projection_rank(BlockKind::commutative(2), 2), 1);
  EXPECT_THROW(minimal_projection_rank(BlockKind::commutative(3), 4), StructureError);
  EXPECT_THROW(minimal_projection_rank(BlockKind{}, 4), StructureError);
}

TEST(Subalgebra, BlockKindTags) {
  EXPECT_EQ(BlockKind::parse("C4"), BlockKind::commutative(4));
  EXPECT_EQ(BlockKind::parse("M2").tag(), "M2");
  EXPECT_THROW(BlockKind::parse("X2"), SpecError);
  EXPECT_THROW(BlockKind::parse("C"), SpecError);
  EXPECT_THROW(BlockKind::parse("M1"), SpecError);
}

TEST(Subalgebra, BasisForDimension) {
  EXPECT_EQ(basis_for_dimension(8).size(), 64u);
  EXPECT_THROW(basis_for_dimension(3), InvalidArgumentError);
}
