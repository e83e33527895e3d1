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

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "paulest/channel.hpp"
#include "paulest/errors.hpp"
#include "paulest/fisher.hpp"
#include "paulest/subalgebra.hpp"

namespace paulest {

namespace tol {
inline constexpr double kTripleDeterminant = 1e-9;
inline constexpr double kDegenerateEigenvalues = 1e-6;
inline constexpr double kGimbalLock = 1e-9;
}  // namespace tol

/// Relative frequencies nu_ij = N_ij(+) / N_ij of the outcome M^(i) for
/// input theta^(j).
struct FrequencyMatrix {
  Eigen::Matrix3d nu = Eigen::Matrix3d::Constant(0.5);
  Eigen::Matrix3i counts = Eigen::Matrix3i::Ones();

  void validate() const {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double v = nu(i, j);
        if (!(v >= 0.0 && v <= 1.0)) {
          throw InvalidArgumentError("frequency nu(" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                                     std::to_string(v) + " outside [0, 1]");
        }
        if (counts(i, j) < 1) throw InvalidArgumentError("shot counts must be positive");
        const double hits = v * counts(i, j);
        if (std::abs(hits - std::round(hits)) > 1e-9 * std::max(1, counts(i, j))) {
          throw InvalidArgumentError("nu * N is not an integer in cell (" + std::to_string(i) + "," +
                                     std::to_string(j) + ")");
        }
      }
    }
  }
};

/// Three Bloch vectors as the columns of a 3x3 matrix; the columns must be
/// linearly independent.
inline void require_invertible_triple(const Eigen::Matrix3d& triple, const char* name) {
  if (std::abs(triple.determinant()) <= tol::kTripleDeterminant) {
    throw SingularMatrixError(std::string(name) + " triple is singular (|det| = " +
                              std::to_string(std::abs(triple.determinant())) + ")");
  }
  for (int j = 0; j < 3; ++j) {
    if (triple.col(j).squaredNorm() > 1.0 + 1e-12) {
      throw InvalidStateError(std::string(name) + " column " + std::to_string(j) + " lies outside the Bloch ball");
    }
  }
}

// ---------------------------------------------------------------------------
// Known directions

/// Solves nu_k = m_0/sqrt(n) + sum_b lambda_b c_b^(k) for lambda, one
/// configuration per block.
inline RealVector estimate_lambda_known_directions(const SubalgebraDecomposition& d,
                                                   std::span<const MeasurementConfiguration> configs,
                                                   std::span<const double> frequencies) {
  const auto blocks = static_cast<Eigen::Index>(d.block_count());
  if (static_cast<Eigen::Index>(configs.size()) != blocks || frequencies.size() != configs.size()) {
    throw DimensionError("need exactly one configuration and one frequency per unknown lambda (" +
                         std::to_string(blocks) + ")");
  }
  RealMatrix system(blocks, blocks);
  RealVector rhs(blocks);
  const double root_n = std::sqrt(static_cast<double>(d.dim));
  for (Eigen::Index k = 0; k < blocks; ++k) {
    const auto& cfg = configs[static_cast<std::size_t>(k)];
    system.row(k) = block_overlaps(d, cfg.state, cfg.effect).transpose();
    rhs[k] = frequencies[static_cast<std::size_t>(k)] - cfg.effect.coeffs[0] / root_n;
  }
  for (Eigen::Index b = 0; b < blocks; ++b) {
    if (system.col(b).cwiseAbs().maxCoeff() < 1e-12) {
      throw UnidentifiableError("no configuration is sensitive to lambda_" + std::to_string(b + 1));
    }
  }
  Eigen::FullPivLU<RealMatrix> lu(system);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw UnidentifiableError("configurations do not determine all lambdas");
  return lu.solve(rhs);
}

/// Qubit form: nu_j = (1 + lambda . c^(j)) / 2 for the three pairs of `set`.
inline Eigen::Vector3d estimate_lambda_known_directions(const ConfigurationSet& set, const Eigen::Vector3d& nu) {
  const Eigen::Matrix3d c = set.c_matrix();
  for (int i = 0; i < 3; ++i) {
    if (c.row(i).cwiseAbs().maxCoeff() < 1e-12) {
      throw UnidentifiableError("no configuration is sensitive to lambda_" + std::to_string(i + 1));
    }
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(c.transpose());
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw UnidentifiableError("configurations do not determine all lambdas");
  return lu.solve((2.0 * nu.array() - 1.0).matrix());
}

// ---------------------------------------------------------------------------
// Unknown directions

/// theta-hat* = (M^T)^{-1} (2 nu - 1).
inline Eigen::Matrix3d estimate_output_states(const Eigen::Matrix3d& measurement_triple, const FrequencyMatrix& freq) {
  if (std::abs(measurement_triple.determinant()) <= tol::kTripleDeterminant) {
    throw SingularMatrixError("measurement triple is singular");
  }
  const Eigen::Matrix3d rhs = (2.0 * freq.nu.array() - 1.0).matrix();
  return measurement_triple.transpose().partialPivLu().solve(rhs);
}

/// A-hat = theta-hat* theta^{-1}.
inline Eigen::Matrix3d estimate_channel_matrix(const Eigen::Matrix3d& output_states, const Eigen::Matrix3d& input_triple) {
  if (std::abs(input_triple.determinant()) <= tol::kTripleDeterminant) {
    throw SingularMatrixError("input triple is singular");
  }
  // X theta = output  <=>  theta^T X^T = output^T
  return input_triple.transpose().partialPivLu().solve(output_states.transpose()).transpose();
}

inline Eigen::Matrix3d symmetrize(const Eigen::Matrix3d& a) { return 0.5 * (a + a.transpose()); }

/// Angle in (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  double w = std::remainder(a, 2.0 * pi);
  if (w <= -pi) w += 2.0 * pi;
  return w;
}

/// Euler angles of R = R_z(phi_1) R_y(phi_2) R_x(phi_3) with phi_2 in
/// [-pi/2, pi/2]. At gimbal lock (|cos phi_2| < 1e-9) phi_3 is set to 0.
struct EulerAngles {
  Eigen::Vector3d angles = Eigen::Vector3d::Zero();
  bool gimbal_lock = false;
};

inline EulerAngles extract_direction_angles(const Eigen::Matrix3d& r) {
  // R(2,0) = sin phi_2, R(0,0) = cos phi_1 cos phi_2, R(1,0) = sin phi_1 cos phi_2,
  // R(2,1) = cos phi_2 sin phi_3, R(2,2) = cos phi_2 cos phi_3.
  EulerAngles out;
  const double cos2 = std::hypot(r(0, 0), r(1, 0));
  out.angles[1] = std::atan2(r(2, 0), cos2);
  if (cos2 < tol::kGimbalLock) {
    out.gimbal_lock = true;
    // phi_3 = 0 leaves R = R_z R_y: R(0,1) = -sin phi_1, R(1,1) = cos phi_1.
    out.angles[0] = std::atan2(-r(0, 1), r(1, 1));
    out.angles[2] = 0.0;
  } else {
    out.angles[0] = std::atan2(r(1, 0), r(0, 0));
    out.angles[2] = std::atan2(r(2, 1), r(2, 2));
  }
  for (int i = 0; i < 3; ++i) out.angles[i] = wrap_angle(out.angles[i]);
  return out;
}

struct ChannelDecomposition {
  Eigen::Vector3d lambdas = Eigen::Vector3d::Zero();  // descending
  Eigen::Vector3d angles = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  bool degenerate = false;   // some eigenvalue gap below 1e-6; angles low-confidence
  bool gimbal_lock = false;
  double residual = 0.0;     // |A(lambda, phi) - A_sym|_F
};

/// Solves A(lambda, phi) = A_sym through the eigendecomposition
/// A_sym = R Lambda R^T with Lambda descending and R a proper rotation.
///
/// Each eigenvector is signed so its largest-magnitude entry is positive;
/// if that leaves det R = -1, the last column is flipped.
inline ChannelDecomposition decompose_channel_matrix(const Eigen::Matrix3d& a_sym) {
  if ((a_sym - a_sym.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, a_sym.cwiseAbs().maxCoeff())) {
    throw InvalidArgumentError("decompose_channel_matrix expects a symmetric matrix");
  }
  ChannelDecomposition out;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(a_sym);
  const Eigen::Vector3d ascending = solver.eigenvalues();
  out.lambdas = ascending.reverse();
  out.degenerate = (out.lambdas[0] - out.lambdas[1] < tol::kDegenerateEigenvalues) ||
                   (out.lambdas[1] - out.lambdas[2] < tol::kDegenerateEigenvalues);
  const bool isotropic = out.lambdas[0] - out.lambdas[2] < tol::kDegenerateEigenvalues;
  if (isotropic) {
    out.rotation.setIdentity();
  } else {
    out.rotation = solver.eigenvectors().rowwise().reverse();
    for (int j = 0; j < 3; ++j) {
      Eigen::Index k = 0;
      out.rotation.col(j).cwiseAbs().maxCoeff(&k);
      if (out.rotation(k, j) < 0.0) out.rotation.col(j) *= -1.0;
    }
    if (out.rotation.determinant() < 0.0) out.rotation.col(2) *= -1.0;
  }
  const auto euler = extract_direction_angles(out.rotation);
  out.angles = euler.angles;
  out.gimbal_lock = euler.gimbal_lock;
  out.residual = (qubit_affine_matrix({out.lambdas, out.angles}) - a_sym).norm();
  return out;
}

struct ChannelEstimate {
  Eigen::Vector3d lambdas = Eigen::Vector3d::Zero();
  Eigen::Vector3d angles = Eigen::Vector3d::Zero();
  Eigen::Matrix3d raw_a = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d symmetrized_a = Eigen::Matrix3d::Zero();
  bool degenerate = false;
  bool gimbal_lock = false;
  double residual = 0.0;
};

/// nu -> theta-hat* -> A-hat -> (A-hat + A-hat^T)/2 -> (lambda-hat, phi-hat).
inline ChannelEstimate full_direction_estimate(const Eigen::Matrix3d& input_triple,
                                               const Eigen::Matrix3d& measurement_triple, const FrequencyMatrix& freq) {
  ChannelEstimate est;
  est.raw_a = estimate_channel_matrix(estimate_output_states(measurement_triple, freq), input_triple);
  est.symmetrized_a = symmetrize(est.raw_a);
  const auto parts = decompose_channel_matrix(est.symmetrized_a);
  est.lambdas = parts.lambdas;
  est.angles = parts.angles;
  est.degenerate = parts.degenerate;
  est.gimbal_lock = parts.gimbal_lock;
  est.residual = parts.residual;
  return est;
}

/// Outcome probabilities P = (1 + M^T A theta) / 2.
inline Eigen::Matrix3d direction_probabilities(const QubitPauliChannel& truth, const Eigen::Matrix3d& input_triple,
                                               const Eigen::Matrix3d& measurement_triple) {
  return (0.5 * (1.0 + (measurement_triple.transpose() * qubit_affine_matrix(truth) * input_triple).array())).matrix();
}

}  // namespace paulest
