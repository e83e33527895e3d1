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

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "paulest/basis.hpp"
#include "paulest/errors.hpp"
#include "paulest/subalgebra.hpp"

namespace paulest {

// ---------------------------------------------------------------------------
// Qubit Pauli channels with arbitrary directions

/// Contractions lambda along the axes of R = R_z(phi_1) R_y(phi_2) R_x(phi_3).
struct QubitPauliChannel {
  Eigen::Vector3d lambdas = Eigen::Vector3d::Ones();
  Eigen::Vector3d angles = Eigen::Vector3d::Zero();
};

inline Eigen::Matrix3d rotation_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

// Note the sign placement: this is the transpose of the textbook R_y.
inline Eigen::Matrix3d rotation_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d r;
  r << c, 0, -s, 0, 1, 0, s, 0, c;
  return r;
}

inline Eigen::Matrix3d rotation_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d r;
  r << 1, 0, 0, 0, c, -s, 0, s, c;
  return r;
}

inline Eigen::Matrix3d direction_rotation(const Eigen::Vector3d& angles) {
  return rotation_z(angles[0]) * rotation_y(angles[1]) * rotation_x(angles[2]);
}

/// A = R Lambda R^T acting on Bloch vectors.
inline Eigen::Matrix3d qubit_affine_matrix(const QubitPauliChannel& ch) {
  const Eigen::Matrix3d r = direction_rotation(ch.angles);
  Eigen::Matrix3d a = r * ch.lambdas.asDiagonal() * r.transpose();
  // R Lambda R^T is symmetric in exact arithmetic; remove rounding asymmetry.
  return 0.5 * (a + a.transpose());
}

inline Eigen::Vector3d apply_qubit(const QubitPauliChannel& ch, const Eigen::Vector3d& theta) {
  if (theta.squaredNorm() > 1.0 + 1e-12) {
    throw InvalidStateError("input Bloch vector has norm^2 " + std::to_string(theta.squaredNorm()) + " > 1");
  }
  return qubit_affine_matrix(ch) * theta;
}

/// (1 + m . A theta) / 2 for a qubit effect (I + m . sigma)/2.
inline double output_probability(const QubitPauliChannel& ch, const Eigen::Vector3d& theta, const Eigen::Vector3d& m) {
  return 0.5 * (1.0 + m.dot(apply_qubit(ch, theta)));
}

// ---------------------------------------------------------------------------
// Complete positivity

struct CptpReport {
  bool valid = true;
  std::vector<std::string> violations;
  /// Set when the inequalities were applied to blocks of unequal dimension,
  /// a setting they were not derived for.
  bool unequal_block_caveat = false;
};

/// 1 + n lambda_i >= sum_j lambda_j >= -1/(n-1) and |lambda_i| <= 1.
inline CptpReport validate_cptp(std::span<const double> lambdas, int n) {
  if (n < 2) throw InvalidArgumentError("validate_cptp needs n >= 2");
  constexpr double slack = 1e-12;
  CptpReport report;
  double sum = 0.0;
  for (double l : lambdas) sum += l;
  const double lower = -1.0 / (n - 1);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double lhs = 1.0 + n * lambdas[i];
    if (lhs < sum - slack) {
      report.valid = false;
      report.violations.push_back("1 + n*lambda_" + std::to_string(i + 1) + " = " + std::to_string(lhs) +
                                  " < sum(lambda) = " + std::to_string(sum));
    }
    if (std::abs(lambdas[i]) > 1.0 + slack) {
      report.valid = false;
      report.violations.push_back("|lambda_" + std::to_string(i + 1) + "| = " + std::to_string(std::abs(lambdas[i])) +
                                  " > 1");
    }
  }
  if (sum < lower - slack) {
    report.valid = false;
    report.violations.push_back("sum(lambda) = " + std::to_string(sum) + " < -1/(n-1) = " + std::to_string(lower));
  }
  return report;
}

/// Rotations do not change complete positivity, so only lambda is checked.
inline CptpReport validate_cptp(const QubitPauliChannel& ch) {
  return validate_cptp(std::span<const double>(ch.lambdas.data(), 3), 2);
}

// ---------------------------------------------------------------------------
// Generalized Pauli channels over complementary subalgebras

/// Contraction lambdas[i] on block i of a subalgebra decomposition. The basis
/// is shared between copies.
struct GeneralizedPauliChannel {
  std::shared_ptr<const OperatorBasis> basis;
  SubalgebraDecomposition decomposition;
  RealVector lambdas;

  int dim() const { return decomposition.dim; }

  static GeneralizedPauliChannel make(std::shared_ptr<const OperatorBasis> basis, SubalgebraDecomposition d,
                                      RealVector lambdas) {
    if (!basis || basis->dim != d.dim) throw DimensionError("basis does not match decomposition dimension");
    if (static_cast<std::size_t>(lambdas.size()) != d.block_count()) {
      throw DimensionError("expected " + std::to_string(d.block_count()) + " lambdas, got " +
                           std::to_string(lambdas.size()));
    }
    return {std::move(basis), std::move(d), std::move(lambdas)};
  }
};

inline CptpReport validate_cptp(const GeneralizedPauliChannel& ch) {
  auto report = validate_cptp(std::span<const double>(ch.lambdas.data(), static_cast<std::size_t>(ch.lambdas.size())),
                              ch.dim());
  for (const auto& block : ch.decomposition.blocks) {
    if (block.size() != ch.decomposition.blocks.front().size()) report.unequal_block_caveat = true;
  }
  return report;
}

/// Trace-preserving projection onto A_i:
/// E_i(M) = (Tr M / n) I + sum_{l in block i} Tr(M v_l) v_l.
inline ComplexMatrix conditional_expectation(const SubalgebraDecomposition& d, const OperatorBasis& basis,
                                             std::size_t block, const ComplexMatrix& m) {
  if (block >= d.block_count()) {
    throw InvalidArgumentError("block index " + std::to_string(block) + " out of range (" +
                               std::to_string(d.block_count()) + " blocks)");
  }
  if (m.rows() != d.dim || m.cols() != d.dim || basis.dim != d.dim) {
    throw DimensionError("conditional_expectation: dimension mismatch");
  }
  ComplexMatrix out = (m.trace() / static_cast<double>(d.dim)) * ComplexMatrix::Identity(d.dim, d.dim);
  for (int l : d.blocks[block]) {
    const auto& v = basis[static_cast<std::size_t>(l)];
    out += (m * v).trace() * v;
  }
  return out;
}

/// (1 - sum lambda_i)(Tr M / n) I + sum lambda_i E_i(M).
inline ComplexMatrix apply_generalized(const GeneralizedPauliChannel& ch, const ComplexMatrix& m) {
  const int n = ch.dim();
  if (m.rows() != n || m.cols() != n) throw DimensionError("apply_generalized: matrix size mismatch");
  const double lambda_sum = ch.lambdas.sum();
  ComplexMatrix out = ((1.0 - lambda_sum) * m.trace() / static_cast<double>(n)) * ComplexMatrix::Identity(n, n);
  for (std::size_t i = 0; i < ch.decomposition.block_count(); ++i) {
    out += ch.lambdas[static_cast<Eigen::Index>(i)] * conditional_expectation(ch.decomposition, *ch.basis, i, m);
  }
  return out;
}

/// theta_i -> lambda_{pi_i} theta_i for i >= 1.
inline CoefficientVector apply_generalized_coeffs(const GeneralizedPauliChannel& ch, const CoefficientVector& state) {
  const auto report = validate_state(state, *ch.basis);
  if (!report.valid) throw InvalidStateError("apply_generalized_coeffs: " + report.message);
  const auto pi = ch.decomposition.block_of_index();
  CoefficientVector out = state;
  for (std::size_t i = 1; i < pi.size(); ++i) {
    if (pi[i] < 0) throw StructureError("basis index " + std::to_string(i) + " is not covered by the decomposition");
    out.coeffs[static_cast<Eigen::Index>(i)] *= ch.lambdas[pi[i]];
  }
  return out;
}

/// c_b = sum_{l in block b} theta_l m_l for every block b.
inline RealVector block_overlaps(const SubalgebraDecomposition& d, const CoefficientVector& state,
                                 const CoefficientVector& effect) {
  if (state.size() != effect.size() || state.size() != static_cast<std::size_t>(d.dim) * d.dim) {
    throw DimensionError("block_overlaps: dimension mismatch");
  }
  RealVector c = RealVector::Zero(static_cast<Eigen::Index>(d.block_count()));
  for (std::size_t b = 0; b < d.block_count(); ++b) {
    for (int l : d.blocks[b]) c[static_cast<Eigen::Index>(b)] += state.coeffs[l] * effect.coeffs[l];
  }
  return c;
}

/// p = m_0 / sqrt(n) + sum_i lambda_{pi_i} m_i theta_i.
inline double output_probability(const GeneralizedPauliChannel& ch, const CoefficientVector& state,
                                 const CoefficientVector& effect) {
  if (!state.is_state() || effect.is_state()) throw InvalidArgumentError("output_probability expects (State, Effect)");
  if (state.dim != ch.dim() || effect.dim != ch.dim()) throw DimensionError("output_probability: dimension mismatch");
  const auto sr = validate_state(state, *ch.basis);
  if (!sr.valid) throw InvalidStateError("output_probability: " + sr.message);
  const auto er = validate_effect(effect, *ch.basis);
  if (!er.valid) throw InvalidStateError("output_probability: " + er.message);
  return effect.coeffs[0] / std::sqrt(static_cast<double>(ch.dim())) +
         ch.lambdas.dot(block_overlaps(ch.decomposition, state, effect));
}

}  // namespace paulest
