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

#include "paulest/basis.hpp"
#include "support/oracles.hpp"

using namespace paulest;

namespace {

void expect_orthonormal(const OperatorBasis& b) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_LT(hermiticity_defect(b[i]), 1e-15);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Complex ip = (b[i] * b[j]).trace();
      EXPECT_NEAR(ip.real(), i == j ? 1.0 : 0.0, 1e-14) << i << "," << j;
      EXPECT_NEAR(ip.imag(), 0.0, 1e-14);
    }
  }
}

}  // namespace

TEST(Basis, PauliBasisIsOrthonormal) {
  const auto b = build_pauli_basis();
  ASSERT_EQ(b.size(), 4u);
  expect_orthonormal(b);
  for (int a = 0; a < 4; ++a) EXPECT_LT((b[static_cast<std::size_t>(a)] - oracle::pauli(a) / std::sqrt(2.0)).norm(), 1e-15);
}

TEST(Basis, TensorPauliIndexing) {
  const auto b = build_tensor_pauli_basis(2);
  ASSERT_EQ(b.dim, 4);
  ASSERT_EQ(b.size(), 16u);
  expect_orthonormal(b);
  for (int i = 0; i < 16; ++i) {
    EXPECT_LT((b[static_cast<std::size_t>(i)] - oracle::pauli_string(i) / 2.0).norm(), 1e-15) << i;
  }
}

TEST(Basis, TensorPauliResourceLimit) {
  EXPECT_THROW(build_tensor_pauli_basis(3, 1000), ResourceError);
  EXPECT_THROW(build_tensor_pauli_basis(0), InvalidArgumentError);
}

TEST(Basis, ProjectReconstructRoundTrip) {
  oracle::Gen gen(11);
  for (int n : {2, 4}) {
    const auto b = n == 2 ? build_pauli_basis() : build_tensor_pauli_basis(2);
    for (int trial = 0; trial < 200; ++trial) {
      const auto h = gen.hermitian(n);
      const auto c = project_coefficients(h, b);
      EXPECT_LT((reconstruct_matrix(c, b) - h).norm(), 1e-12);
    }
  }
}

TEST(Basis, ProjectRejectsNonHermitian) {
  ComplexMatrix m(2, 2);
  m << 0, 1, 0, 0;
  EXPECT_THROW(project_coefficients(m, build_pauli_basis()), InvalidArgumentError);
}

TEST(Basis, DimensionMismatch) {
  const auto b4 = build_tensor_pauli_basis(2);
  EXPECT_THROW(reconstruct_matrix(bloch_qubit_state({0, 0, 1}), b4), DimensionError);
  EXPECT_THROW(project_coefficients(ComplexMatrix::Identity(2, 2), b4), DimensionError);
}

TEST(Basis, QubitCoefficientsAreBlochScaled) {
  const auto s = bloch_qubit_state({0.2, -0.4, 0.5});
  EXPECT_DOUBLE_EQ(s.coeffs[0], 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(s.coeffs[2], -0.4 / std::sqrt(2.0));
  EXPECT_TRUE(qubit_bloch_vector(s).isApprox(Eigen::Vector3d(0.2, -0.4, 0.5), 1e-15));
  EXPECT_THROW(bloch_qubit_state({1.0, 0.1, 0.0}), InvalidStateError);
  EXPECT_THROW(bloch_qubit_effect({0.0, 0.0, 1.01}), InvalidStateError);
}

TEST(Basis, ProbabilityMatchesDenseTrace) {
  oracle::Gen gen(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Vector3d theta = gen.ball3(), m = gen.ball3();
    const double dense = (oracle::qubit_density(theta) * oracle::qubit_density(m)).trace().real();
    EXPECT_NEAR(measurement_probability(bloch_qubit_state(theta), bloch_qubit_effect(m)), dense, 1e-14);
  }
  const auto b = build_tensor_pauli_basis(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rho = gen.density(4, 1 + trial % 4);
    const auto e = gen.density(4, 2);
    const auto s = project_coefficients(rho, b, CoefficientKind::State);
    const auto eff = project_coefficients(e, b, CoefficientKind::Effect);
    EXPECT_NEAR(measurement_probability(s, eff), (rho * e).trace().real(), 1e-13);
    EXPECT_NEAR(measurement_probability(s, eff), eff.coeffs[0] / 2.0 + traceless_overlap(s, eff), 1e-14);
  }
}

TEST(Basis, ProbabilityKindChecks) {
  const auto s = bloch_qubit_state({0, 0, 1});
  const auto e = bloch_qubit_effect({0, 0, 1});
  EXPECT_THROW(measurement_probability(e, s), InvalidArgumentError);
  EXPECT_NEAR(measurement_probability(s, e), 1.0, 1e-15);
  EXPECT_NEAR(measurement_probability(s, complement_effect(e)), 0.0, 1e-15);
}

TEST(Basis, ValidateState) {
  const auto b = build_pauli_basis();
  const auto pure = validate_state(bloch_qubit_state({0, 1, 0}), b);
  EXPECT_TRUE(pure.valid);
  EXPECT_TRUE(pure.von_neumann);
  EXPECT_EQ(pure.rank, 1);
  const auto mixed = validate_state(bloch_qubit_state({0, 0, 0}), b);
  EXPECT_TRUE(mixed.valid);
  EXPECT_NEAR(mixed.min_eigenvalue, 0.5, 1e-15);
  EXPECT_FALSE(mixed.von_neumann);

  RealVector bad_trace(4);
  bad_trace << 0.5, 0, 0, 0;
  EXPECT_FALSE(validate_state(CoefficientVector::state(bad_trace, 2), b).valid);
  RealVector negative(4);
  negative << 1 / std::sqrt(2.0), 0, 0, 1.2 / std::sqrt(2.0);
  EXPECT_FALSE(validate_state(CoefficientVector::state(negative, 2), b).valid);
  EXPECT_FALSE(validate_state(bloch_qubit_effect({0, 0, 1}), b).valid);
}

TEST(Basis, ValidateEffect) {
  const auto b = build_pauli_basis();
  const auto proj = validate_effect(bloch_qubit_effect({1, 0, 0}), b);
  EXPECT_TRUE(proj.valid);
  EXPECT_TRUE(proj.von_neumann);
  RealVector big(4);
  big << 1.2 * std::sqrt(2.0), 0, 0, 0;  // 1.2 I
  EXPECT_FALSE(validate_effect(CoefficientVector::effect(big, 2), b).valid);
  const auto zero = validate_effect(CoefficientVector::effect(RealVector::Zero(4), 2), b);
  EXPECT_TRUE(zero.valid);
  EXPECT_TRUE(zero.von_neumann);
  EXPECT_EQ(zero.rank, 0);
}

TEST(Basis, SpectralSummaryMultiplicity) {
  const auto b = build_tensor_pauli_basis(2);
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  rho(0, 0) = rho(1, 1) = 0.5;
  const auto flat = spectral_summary(project_coefficients(rho, b, CoefficientKind::State), b);
  EXPECT_TRUE(flat.flat_on_support);
  EXPECT_EQ(flat.min_multiplicity, 2);
  EXPECT_NEAR(flat.purity, 0.5, 1e-14);

  rho.setZero();
  rho(0, 0) = 0.4;
  rho(1, 1) = 0.4;
  rho(2, 2) = 0.2;
  const auto uneven = spectral_summary(project_coefficients(rho, b, CoefficientKind::State), b);
  EXPECT_FALSE(uneven.flat_on_support);
  EXPECT_EQ(uneven.min_multiplicity, 2);
  EXPECT_LE(uneven.purity, 1.0 / uneven.min_multiplicity);
}

TEST(Basis, PurityBoundProperty) {
  oracle::Gen gen(13);
  const auto b = build_tensor_pauli_basis(2);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = project_coefficients(gen.density(4, 1 + trial % 4), b, CoefficientKind::State);
    const auto summary = spectral_summary(s, b);
    EXPECT_LE(summary.purity, 1.0 / summary.min_multiplicity + 1e-12);
  }
}

TEST(Basis, RescaledEffectView) {
  const auto e = bloch_qubit_effect({0.6, 0, 0.8});
  const auto view = rescaled_effect_view(e);
  EXPECT_DOUBLE_EQ(view[0], 1.0 / std::sqrt(2.0));
  // M = m_0 sqrt(n) (I/n + sum m*_i v_i) reproduces the effect.
  const auto b = build_pauli_basis();
  ComplexMatrix rebuilt = ComplexMatrix::Identity(2, 2) / 2.0;
  for (int i = 1; i < 4; ++i) rebuilt += view[i] * b[static_cast<std::size_t>(i)];
  rebuilt *= e.coeffs[0] * std::sqrt(2.0);
  EXPECT_LT((rebuilt - reconstruct_matrix(e, b)).norm(), 1e-14);
  EXPECT_THROW(rescaled_effect_view(CoefficientVector::effect(RealVector::Zero(4), 2)), InvalidArgumentError);
}
