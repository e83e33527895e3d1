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

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "paulest/errors.hpp"

namespace paulest {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kPositivity = 1e-9;
inline constexpr double kVonNeumann = 1e-9;
inline constexpr double kClosure = 1e-9;
inline constexpr double kOrthogonality = 1e-12;
}  // namespace tol

/// Orthonormal Hermitian basis {v_0, ..., v_{n^2-1}} of the n x n complex
/// matrices with respect to <A, B> = Tr(A B), and v_0 = I / sqrt(n).
struct OperatorBasis {
  int dim = 0;
  std::vector<ComplexMatrix> elements;

  std::size_t size() const { return elements.size(); }
  const ComplexMatrix& operator[](std::size_t i) const { return elements[i]; }
};

enum class CoefficientKind { State, Effect };

/// Real coefficients of a Hermitian operator in an orthonormal basis. States
/// carry coeffs[0] = 1/sqrt(n); effects leave coeffs[0] (m_0) free.
struct CoefficientVector {
  CoefficientKind kind = CoefficientKind::State;
  RealVector coeffs;
  int dim = 0;

  static CoefficientVector state(RealVector c, int n) {
    return {CoefficientKind::State, std::move(c), n};
  }
  static CoefficientVector effect(RealVector c, int n) {
    return {CoefficientKind::Effect, std::move(c), n};
  }

  bool is_state() const { return kind == CoefficientKind::State; }
  std::size_t size() const { return static_cast<std::size_t>(coeffs.size()); }
};

inline std::array<Eigen::Matrix2cd, 4> pauli_matrices() {
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd s0, s1, s2, s3;
  s0 << 1, 0, 0, 1;
  s1 << 0, 1, 1, 0;
  s2 << 0, -i, i, 0;
  s3 << 1, 0, 0, -1;
  return {s0, s1, s2, s3};
}

/// {I, sigma_1, sigma_2, sigma_3} / sqrt(2).
inline OperatorBasis build_pauli_basis() {
  OperatorBasis basis;
  basis.dim = 2;
  const double scale = 1.0 / std::sqrt(2.0);
  for (const auto& s : pauli_matrices()) basis.elements.emplace_back(scale * s);
  return basis;
}

/// Basis of (1/sqrt(n)) sigma_{j_1} (x) ... (x) sigma_{j_k} for n = 2^k.
///
/// Element index is the base-4 number j_1 j_2 ... j_k with j_1 the most
/// significant digit, so for k = 2 index 4a + b is sigma_a (x) sigma_b / 2.
/// Throws ResourceError when the n^2 dense n x n elements would exceed
/// `max_bytes`.
inline OperatorBasis build_tensor_pauli_basis(int k, std::size_t max_bytes = std::size_t{1} << 30) {
  if (k < 1) throw InvalidArgumentError("tensor Pauli basis needs k >= 1");
  if (k > 15) throw ResourceError("tensor Pauli basis with k = " + std::to_string(k) + " is too large");
  const std::size_t n = std::size_t{1} << k;
  const long double bytes = static_cast<long double>(n) * n * n * n * sizeof(Complex);
  if (bytes > static_cast<long double>(max_bytes)) {
    throw ResourceError("tensor Pauli basis with k = " + std::to_string(k) + " needs " +
                        std::to_string(static_cast<double>(bytes)) + " bytes, budget is " +
                        std::to_string(max_bytes));
  }
  const auto paulis = pauli_matrices();
  OperatorBasis basis;
  basis.dim = static_cast<int>(n);
  basis.elements.reserve(n * n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t index = 0; index < n * n; ++index) {
    ComplexMatrix product = ComplexMatrix::Identity(1, 1);
    for (int digit = k - 1; digit >= 0; --digit) {
      const auto& s = paulis[(index >> (2 * digit)) & 3u];
      ComplexMatrix next(product.rows() * 2, product.cols() * 2);
      for (Eigen::Index r = 0; r < product.rows(); ++r) {
        for (Eigen::Index c = 0; c < product.cols(); ++c) {
          next.block(2 * r, 2 * c, 2, 2) = product(r, c) * s;
        }
      }
      product = std::move(next);
    }
    basis.elements.emplace_back(scale * product);
  }
  return basis;
}

inline double hermiticity_defect(const ComplexMatrix& m) { return (m - m.adjoint()).norm(); }

/// Sum_i c_i v_i.
inline ComplexMatrix reconstruct_matrix(const CoefficientVector& c, const OperatorBasis& basis) {
  if (c.size() != basis.size() || c.dim != basis.dim) {
    throw DimensionError("coefficient vector of length " + std::to_string(c.size()) +
                         " does not match basis of size " + std::to_string(basis.size()));
  }
  ComplexMatrix m = ComplexMatrix::Zero(basis.dim, basis.dim);
  for (std::size_t i = 0; i < basis.size(); ++i) m += c.coeffs[static_cast<Eigen::Index>(i)] * basis[i];
  return m;
}

/// c_i = Tr(M v_i). Inverse of reconstruct_matrix.
inline CoefficientVector project_coefficients(const ComplexMatrix& m, const OperatorBasis& basis,
                                              CoefficientKind kind = CoefficientKind::Effect) {
  if (m.rows() != basis.dim || m.cols() != basis.dim) {
    throw DimensionError("matrix of size " + std::to_string(m.rows()) + " does not match basis dimension " +
                         std::to_string(basis.dim));
  }
  if (hermiticity_defect(m) > tol::kHermitian * std::max(1.0, m.norm())) {
    throw InvalidArgumentError("project_coefficients: matrix is not Hermitian");
  }
  RealVector c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    c[static_cast<Eigen::Index>(i)] = (m * basis[i]).trace().real();
  }
  return {kind, std::move(c), basis.dim};
}

/// Qubit state (1/2)(I + theta . sigma) in the Pauli basis coordinates.
inline CoefficientVector bloch_qubit_state(const Eigen::Vector3d& theta) {
  if (theta.squaredNorm() > 1.0 + 1e-12) {
    throw InvalidStateError("Bloch vector norm^2 = " + std::to_string(theta.squaredNorm()) + " exceeds 1");
  }
  RealVector c(4);
  const double s = 1.0 / std::sqrt(2.0);
  c << s, s * theta[0], s * theta[1], s * theta[2];
  return CoefficientVector::state(std::move(c), 2);
}

/// Qubit effect (1/2)(I + m . sigma); von Neumann when |m| = 1.
inline CoefficientVector bloch_qubit_effect(const Eigen::Vector3d& m) {
  if (m.squaredNorm() > 1.0 + 1e-12) {
    throw InvalidStateError("effect Bloch vector norm^2 = " + std::to_string(m.squaredNorm()) + " exceeds 1");
  }
  RealVector c(4);
  const double s = 1.0 / std::sqrt(2.0);
  c << s, s * m[0], s * m[1], s * m[2];
  return CoefficientVector::effect(std::move(c), 2);
}

/// Bloch vector of a qubit coefficient vector whose trace part is 1/sqrt(2).
inline Eigen::Vector3d qubit_bloch_vector(const CoefficientVector& c) {
  if (c.dim != 2 || c.size() != 4) throw DimensionError("qubit_bloch_vector needs a qubit coefficient vector");
  return std::sqrt(2.0) * c.coeffs.tail<3>();
}

/// I - M for a two-element POVM {M, I - M}.
inline CoefficientVector complement_effect(const CoefficientVector& effect) {
  RealVector c = -effect.coeffs;
  c[0] += std::sqrt(static_cast<double>(effect.dim));
  return CoefficientVector::effect(std::move(c), effect.dim);
}

/// m*_i = m_i / (m_0 sqrt(n)) for i >= 1, so that
/// M = m_0 sqrt(n) (I/n + sum_i m*_i v_i). Entry 0 is set to 1/sqrt(n).
/// Derived view only; nothing else in the library consumes it.
inline RealVector rescaled_effect_view(const CoefficientVector& effect) {
  const double n = effect.dim;
  if (effect.coeffs[0] == 0.0) throw InvalidArgumentError("rescaled view undefined for m_0 = 0");
  RealVector out = effect.coeffs / (effect.coeffs[0] * std::sqrt(n));
  out[0] = 1.0 / std::sqrt(n);
  return out;
}

/// p = Tr(rho M) = sum_i m_i theta_i = m_0 / sqrt(n) + d.
inline double measurement_probability(const CoefficientVector& state, const CoefficientVector& effect) {
  if (state.size() != effect.size() || state.dim != effect.dim) {
    throw DimensionError("state and effect dimensions differ");
  }
  if (!state.is_state() || effect.is_state()) {
    throw InvalidArgumentError("measurement_probability expects (State, Effect)");
  }
  return state.coeffs.dot(effect.coeffs);
}

/// d = sum_{i >= 1} m_i theta_i.
inline double traceless_overlap(const CoefficientVector& state, const CoefficientVector& effect) {
  if (state.size() != effect.size()) throw DimensionError("state and effect dimensions differ");
  const auto len = static_cast<Eigen::Index>(state.size()) - 1;
  return state.coeffs.tail(len).dot(effect.coeffs.tail(len));
}

struct ValidityReport {
  bool valid = true;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool von_neumann = false;
  int rank = 0;
  std::string message;
};

namespace detail {

inline RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

inline void fill_spectrum(ValidityReport& report, const RealVector& ev) {
  report.min_eigenvalue = ev.minCoeff();
  report.max_eigenvalue = ev.maxCoeff();
  report.von_neumann = true;
  report.rank = 0;
  for (double e : ev) {
    if (std::abs(e - 1.0) <= tol::kVonNeumann) {
      ++report.rank;
    } else if (std::abs(e) > tol::kVonNeumann) {
      report.von_neumann = false;
    }
  }
  if (!report.von_neumann) report.rank = static_cast<int>((ev.array().abs() > tol::kVonNeumann).count());
}

}  // namespace detail

/// Positivity and unit trace of the reconstructed density matrix.
inline ValidityReport validate_state(const CoefficientVector& c, const OperatorBasis& basis) {
  ValidityReport report;
  const ComplexMatrix rho = reconstruct_matrix(c, basis);
  detail::fill_spectrum(report, detail::hermitian_eigenvalues(rho));
  const double expected_trace_coeff = 1.0 / std::sqrt(static_cast<double>(basis.dim));
  if (!c.is_state()) {
    report.valid = false;
    report.message = "coefficient vector is tagged as an effect";
  } else if (std::abs(c.coeffs[0] - expected_trace_coeff) > 1e-12) {
    report.valid = false;
    report.message = "trace coefficient " + std::to_string(c.coeffs[0]) + " != 1/sqrt(n)";
  } else if (report.min_eigenvalue < -tol::kPositivity) {
    report.valid = false;
    report.message = "not positive semidefinite: min eigenvalue " + std::to_string(report.min_eigenvalue);
  }
  return report;
}

/// Eigenvalues of the effect must lie in [0, 1]; flags projections.
inline ValidityReport validate_effect(const CoefficientVector& c, const OperatorBasis& basis) {
  ValidityReport report;
  const ComplexMatrix m = reconstruct_matrix(c, basis);
  detail::fill_spectrum(report, detail::hermitian_eigenvalues(m));
  if (report.min_eigenvalue < -tol::kPositivity) {
    report.valid = false;
    report.message = "effect has negative eigenvalue " + std::to_string(report.min_eigenvalue);
  } else if (report.max_eigenvalue > 1.0 + tol::kPositivity) {
    report.valid = false;
    report.message = "effect has eigenvalue above 1: " + std::to_string(report.max_eigenvalue);
  }
  return report;
}

struct SpectralSummary {
  double purity = 0.0;
  int min_multiplicity = 1;
  RealVector eigenvalues;  // descending
  bool flat_on_support = false;
};

/// Purity and multiplicity K of a state.
///
/// K is the support size when the nonzero spectrum is flat. Otherwise it is
/// the multiplicity of the largest eigenvalue, which still satisfies
/// purity <= max eigenvalue <= 1/K.
inline SpectralSummary spectral_summary(const CoefficientVector& state, const OperatorBasis& basis) {
  const auto report = validate_state(state, basis);
  if (!report.valid) throw InvalidStateError("spectral_summary: " + report.message);
  RealVector ev = detail::hermitian_eigenvalues(reconstruct_matrix(state, basis)).reverse();
  SpectralSummary summary;
  summary.purity = ev.squaredNorm();
  const double top = ev[0];
  int support = 0;
  int top_count = 0;
  bool flat = true;
  for (double e : ev) {
    if (e > tol::kPositivity) {
      ++support;
      if (std::abs(e - top) > tol::kPositivity) flat = false;
    }
    if (std::abs(e - top) <= tol::kPositivity) ++top_count;
  }
  summary.flat_on_support = flat;
  summary.min_multiplicity = flat ? support : top_count;
  summary.eigenvalues = std::move(ev);
  if (summary.purity > 1.0 / summary.min_multiplicity + 1e-10) {
    throw InvalidStateError("purity " + std::to_string(summary.purity) + " exceeds 1/K");
  }
  return summary;
}

}  // namespace paulest
