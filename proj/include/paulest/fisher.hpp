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
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "paulest/basis.hpp"
#include "paulest/channel.hpp"
#include "paulest/errors.hpp"
#include "paulest/subalgebra.hpp"

namespace paulest {

namespace tol {
inline constexpr double kSingularInformation = 1e-12;
inline constexpr double kFiniteDifferenceStep = 1e-5;
}  // namespace tol

using FisherMatrix = RealMatrix;

// ---------------------------------------------------------------------------
// Configurations

/// Qubit input state theta and effect m, both as Bloch vectors.
struct QubitConfiguration {
  Eigen::Vector3d theta = Eigen::Vector3d::Zero();
  Eigen::Vector3d m = Eigen::Vector3d::UnitX();

  /// c_i = m_i theta_i.
  Eigen::Vector3d c() const { return m.cwiseProduct(theta); }
};

/// Realizes any c in the l1 ball |c_1| + |c_2| + |c_3| <= 1 with a unit
/// effect vector m and a valid Bloch vector theta: with s = sqrt(sum |c_i|),
/// m_i = sign(c_i) sqrt|c_i| / s and theta_i = sqrt|c_i| s.
inline QubitConfiguration realize_c_vector(const Eigen::Vector3d& c) {
  const double l1 = c.cwiseAbs().sum();
  if (l1 > 1.0 + 1e-12) throw InvalidArgumentError("c vector outside the l1 unit ball");
  QubitConfiguration cfg;
  if (l1 == 0.0) {
    cfg.theta.setZero();
    cfg.m = Eigen::Vector3d::UnitX();
    return cfg;
  }
  const double s = std::sqrt(l1);
  for (int i = 0; i < 3; ++i) {
    const double root = std::sqrt(std::abs(c[i]));
    cfg.m[i] = (c[i] < 0 ? -root : root) / s;
    cfg.theta[i] = root * s;
  }
  return cfg;
}

/// Three input/effect pairs; column j of the c-matrix is c^(j).
struct ConfigurationSet {
  std::array<QubitConfiguration, 3> configs;

  Eigen::Matrix3d c_matrix() const {
    Eigen::Matrix3d c;
    for (int j = 0; j < 3; ++j) c.col(j) = configs[static_cast<std::size_t>(j)].c();
    return c;
  }

  static ConfigurationSet from_c_matrix(const Eigen::Matrix3d& c) {
    ConfigurationSet set;
    for (int j = 0; j < 3; ++j) set.configs[static_cast<std::size_t>(j)] = realize_c_vector(c.col(j));
    return set;
  }
};

/// State and effect coefficient vectors for a generalized channel.
struct MeasurementConfiguration {
  CoefficientVector state;
  CoefficientVector effect;
};

// ---------------------------------------------------------------------------
// Finite-difference oracle

/// F_ij = sum_alpha (1/p_alpha) dp_alpha/dlambda_i dp_alpha/dlambda_j for the
/// two-outcome model {p(lambda), 1 - p(lambda)}, with central differences.
/// `prob` maps a parameter vector to p.
template <class ProbFn>
FisherMatrix fisher_from_model(ProbFn&& prob, const RealVector& lambdas, double step = tol::kFiniteDifferenceStep) {
  if (!(step > 0.0)) throw InvalidArgumentError("finite-difference step must be positive");
  const double p = prob(lambdas);
  if (p <= tol::kSingularInformation || p >= 1.0 - tol::kSingularInformation) {
    throw SingularInformationError("outcome probability " + std::to_string(p) + " at the boundary of [0, 1]");
  }
  const Eigen::Index k = lambdas.size();
  RealVector grad(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    RealVector up = lambdas, down = lambdas;
    up[i] += step;
    down[i] -= step;
    grad[i] = (prob(up) - prob(down)) / (2.0 * step);
  }
  // dp_{1-p} = -dp, so both outcomes contribute the same outer product.
  return (1.0 / p + 1.0 / (1.0 - p)) * (grad * grad.transpose());
}

// ---------------------------------------------------------------------------
// Qubit closed forms

namespace detail {

inline double information_denominator(const Eigen::Vector3d& lambdas, const Eigen::Vector3d& c) {
  const double lc = lambdas.dot(c);
  const double denom = 1.0 - lc * lc;
  if (denom < tol::kSingularInformation) {
    throw SingularInformationError("|lambda . c| = " + std::to_string(std::abs(lc)) +
                                   " reaches 1; Fisher information diverges");
  }
  return denom;
}

inline void require_von_neumann(const QubitConfiguration& cfg) {
  if (std::abs(cfg.m.norm() - 1.0) > 1e-9) {
    throw InvalidArgumentError("qubit Fisher closed form needs a von Neumann effect (|m| = 1), got |m| = " +
                               std::to_string(cfg.m.norm()));
  }
  if (cfg.theta.squaredNorm() > 1.0 + 1e-12) throw InvalidStateError("input Bloch vector outside the unit ball");
}

}  // namespace detail

/// F_ij = c_i c_j / (1 - (lambda . c)^2). Rank at most one.
inline FisherMatrix qubit_fisher_matrix(const Eigen::Vector3d& lambdas, const QubitConfiguration& cfg) {
  detail::require_von_neumann(cfg);
  const Eigen::Vector3d c = cfg.c();
  return (c * c.transpose()) / detail::information_denominator(lambdas, c);
}

/// F^Sigma = F^(1) + F^(2) + F^(3), summed entrywise.
inline FisherMatrix total_fisher_matrix(const Eigen::Vector3d& lambdas, const ConfigurationSet& set) {
  FisherMatrix total = FisherMatrix::Zero(3, 3);
  for (const auto& cfg : set.configs) total += qubit_fisher_matrix(lambdas, cfg);
  return total;
}

/// det F^Sigma = det(C)^2 / prod_j [1 - (lambda . c^(j))^2], as a function of
/// the c-matrix alone.
inline double det_fisher_from_c(const Eigen::Vector3d& lambdas, const Eigen::Matrix3d& c) {
  double denom = 1.0;
  for (int j = 0; j < 3; ++j) denom *= detail::information_denominator(lambdas, c.col(j));
  const double det_c = c.determinant();
  return det_c * det_c / denom;
}

inline double total_fisher_det(const Eigen::Vector3d& lambdas, const ConfigurationSet& set) {
  for (const auto& cfg : set.configs) detail::require_von_neumann(cfg);
  return det_fisher_from_c(lambdas, set.c_matrix());
}

/// Tr F = sum m_i^2 theta_i^2 / (1 - (sum lambda_i m_i theta_i)^2).
inline double total_fisher_trace(const Eigen::Vector3d& lambdas, const QubitConfiguration& cfg) {
  detail::require_von_neumann(cfg);
  const Eigen::Vector3d c = cfg.c();
  return c.squaredNorm() / detail::information_denominator(lambdas, c);
}

/// theta^(j) = m^(j) = signs[j] e_j. The c-matrix is the identity for any
/// choice of signs.
inline ConfigurationSet optimal_qubit_configuration(const std::array<int, 3>& signs = {1, 1, 1}) {
  ConfigurationSet set;
  for (int j = 0; j < 3; ++j) {
    const double s = signs[static_cast<std::size_t>(j)] < 0 ? -1.0 : 1.0;
    set.configs[static_cast<std::size_t>(j)].theta = s * Eigen::Vector3d::Unit(j);
    set.configs[static_cast<std::size_t>(j)].m = s * Eigen::Vector3d::Unit(j);
  }
  return set;
}

// ---------------------------------------------------------------------------
// Generalized channels

namespace detail {

inline double outcome_variance(const GeneralizedPauliChannel& ch, const MeasurementConfiguration& cfg,
                               const RealVector& c) {
  const double base = cfg.effect.coeffs[0] / std::sqrt(static_cast<double>(ch.dim()));
  const double p = base + ch.lambdas.dot(c);
  if (p < tol::kSingularInformation || 1.0 - p < tol::kSingularInformation) {
    throw SingularInformationError("outcome probability " + std::to_string(p) +
                                   " at the boundary; Fisher information diverges");
  }
  return p * (1.0 - p);
}

}  // namespace detail

/// F_ij = c_i c_j / [p (1 - p)] with c_b the block overlaps of the pair.
inline FisherMatrix generalized_fisher_matrix(const GeneralizedPauliChannel& ch, const MeasurementConfiguration& cfg) {
  const RealVector c = block_overlaps(ch.decomposition, cfg.state, cfg.effect);
  return (c * c.transpose()) / detail::outcome_variance(ch, cfg, c);
}

/// F_jj = c_j^2 / [(m_0/sqrt(n) + sum_i lambda_i c_i)(1 - m_0/sqrt(n) - sum_i lambda_i c_i)].
/// For a pair supported in block j this is d^2 / [(m_0/sqrt(n) + lambda_j d)(...)].
inline double block_fisher_diag(const GeneralizedPauliChannel& ch, const MeasurementConfiguration& cfg,
                                std::size_t block) {
  if (block >= ch.decomposition.block_count()) throw InvalidArgumentError("block index out of range");
  const RealVector c = block_overlaps(ch.decomposition, cfg.state, cfg.effect);
  const double cj = c[static_cast<Eigen::Index>(block)];
  return cj * cj / detail::outcome_variance(ch, cfg, c);
}

/// I_max = 1 / [(1 - lambda_j)(K/(n-K) + lambda_j)], the largest F_jj over
/// pairs inside a block whose minimal projections have rank K.
inline double max_fisher_info(int n, int multiplicity, double lambda_j) {
  if (n < 2 || multiplicity < 1 || multiplicity >= n) {
    throw InvalidArgumentError("max_fisher_info needs 1 <= K < n (n = " + std::to_string(n) +
                               ", K = " + std::to_string(multiplicity) + ")");
  }
  const double lower = -1.0 / (n - 1);
  if (lambda_j > 1.0 + 1e-12 || lambda_j < lower - 1e-12) {
    throw InvalidArgumentError("lambda_j = " + std::to_string(lambda_j) + " outside [-1/(n-1), 1]");
  }
  const double ratio = static_cast<double>(multiplicity) / (n - multiplicity);
  const double denom = (1.0 - lambda_j) * (ratio + lambda_j);
  if (std::abs(1.0 - lambda_j) < tol::kSingularInformation || std::abs(ratio + lambda_j) < tol::kSingularInformation) {
    throw SingularInformationError("max_fisher_info has a pole at lambda_j = " + std::to_string(lambda_j));
  }
  return 1.0 / denom;
}

/// Optimal pair for one block: a minimal-rank projection P in the block as
/// the effect and the state P / rank.
struct BlockOptimum {
  MeasurementConfiguration config;
  ComplexMatrix projection;
  int rank = 0;            // K
  double overlap = 0.0;    // d = (n - K) / n
};

/// Finds a minimal-rank projection in block `block` by eigendecomposing a
/// generic element sum_l r_l v_l (r_l drawn from `seed`) and taking its
/// smallest eigenspace, preferring the largest eigenvalue on ties.
inline BlockOptimum optimal_block_config(const SubalgebraDecomposition& d, const OperatorBasis& basis,
                                         std::size_t block, std::uint64_t seed = 0x5eedULL) {
  if (block >= d.block_count()) throw InvalidArgumentError("block index out of range");
  if (basis.dim != d.dim) throw DimensionError("basis does not match decomposition");
  const int n = d.dim;
  std::mt19937_64 rng(seed + block);
  std::uniform_real_distribution<double> weight(0.5, 1.5);
  ComplexMatrix generic = ComplexMatrix::Zero(n, n);
  for (int l : d.blocks[block]) generic += weight(rng) * basis[static_cast<std::size_t>(l)];

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(generic);
  const RealVector& ev = solver.eigenvalues();  // ascending
  constexpr double cluster_gap = 1e-8;
  Eigen::Index best_start = 0, best_len = n + 1;
  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index end = start + 1;
    while (end < n && ev[end] - ev[end - 1] < cluster_gap) ++end;
    const Eigen::Index len = end - start;
    if (len <= best_len) {  // later clusters have larger eigenvalues
      best_len = len;
      best_start = start;
    }
    start = end;
  }
  const ComplexMatrix vecs = solver.eigenvectors().middleCols(best_start, best_len);
  ComplexMatrix projection = vecs * vecs.adjoint();
  projection = 0.5 * (projection + projection.adjoint()).eval();

  if ((projection * projection - projection).norm() > tol::kClosure) {
    throw StructureError("eigenprojection is not idempotent");
  }
  if (detail::span_residual(projection, d.blocks[block], basis) > tol::kClosure) {
    throw StructureError("block " + std::to_string(block) + " contains no projection of its generic element; "
                         "is it closed under multiplication?");
  }
  const int rank = static_cast<int>(best_len);
  if (rank >= n) throw StructureError("block " + std::to_string(block) + " has no proper projection");

  BlockOptimum out;
  out.rank = rank;
  out.projection = projection;
  out.config.effect = project_coefficients(projection, basis, CoefficientKind::Effect);
  // The projection lies in the block's span; drop round-off elsewhere.
  RealVector kept = RealVector::Zero(out.config.effect.coeffs.size());
  kept[0] = out.config.effect.coeffs[0];
  for (int l : d.blocks[block]) kept[l] = out.config.effect.coeffs[l];
  out.config.effect.coeffs = kept;
  out.config.state = CoefficientVector::state(out.config.effect.coeffs / rank, n);
  out.overlap = traceless_overlap(out.config.state, out.config.effect);
  return out;
}

inline BlockOptimum optimal_block_config(const GeneralizedPauliChannel& ch, std::size_t block,
                                         std::uint64_t seed = 0x5eedULL) {
  return optimal_block_config(ch.decomposition, *ch.basis, block, seed);
}

// ---------------------------------------------------------------------------
// Cramer-Rao

struct CramerRaoBound {
  bool bounded = false;
  RealMatrix covariance;                 // F^{-1} when bounded
  std::vector<RealVector> null_directions;  // eigenvectors of F with zero eigenvalue otherwise
};

/// Var(lambda-hat) >= F^{-1}. A singular F leaves the variance unbounded
/// along its null directions, which are reported instead.
inline CramerRaoBound cramer_rao_bound(const FisherMatrix& f) {
  if (f.rows() != f.cols()) throw DimensionError("Fisher matrix must be square");
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(0.5 * (f + f.transpose()));
  const RealVector& ev = solver.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  CramerRaoBound out;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] <= tol::kSingularInformation * scale) out.null_directions.emplace_back(solver.eigenvectors().col(i));
  }
  out.bounded = out.null_directions.empty();
  if (out.bounded) out.covariance = f.inverse();
  return out;
}

}  // namespace paulest
