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
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "paulest/channel.hpp"
#include "paulest/errors.hpp"
#include "paulest/fisher.hpp"
#include "paulest/parallel.hpp"

namespace paulest {

struct OptimizerSettings {
  int grid_points_per_axis = 5;
  int max_iterations = 10000;
  double step_size = 0.1;
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
  /// Half-width of the seeded uniform jitter added to each grid start. Grid
  /// points with det C = 0 are stationary for the determinant, so starts are
  /// nudged off them.
  double start_jitter = 1e-2;
  unsigned threads = 1;

  void validate() const {
    if (grid_points_per_axis < 2) throw InvalidArgumentError("grid_points_per_axis must be >= 2");
    if (max_iterations < 1) throw InvalidArgumentError("max_iterations must be >= 1");
    if (!(step_size > 0.0)) throw InvalidArgumentError("step_size must be positive");
    if (!(tolerance > 0.0)) throw InvalidArgumentError("tolerance must be positive");
    if (!(start_jitter >= 0.0 && start_jitter < 0.05)) throw InvalidArgumentError("start_jitter must lie in [0, 0.05)");
  }
};

/// Euclidean projection onto {x : |x_1| + ... + |x_k| <= radius} by sorting
/// |x| and soft-thresholding.
inline RealVector project_l1_ball(const RealVector& v, double radius = 1.0) {
  if (v.cwiseAbs().sum() <= radius) return v;
  std::vector<double> u(v.data(), v.data() + v.size());
  for (double& x : u) x = std::abs(x);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, threshold = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double t = (cumulative - radius) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) threshold = t;
  }
  RealVector w(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::max(std::abs(v[i]) - threshold, 0.0);
    w[i] = v[i] < 0.0 ? -mag : mag;
  }
  return w;
}

/// Projects each consecutive group of `group` entries onto the unit l1 ball.
inline RealVector project_l1_groups(const RealVector& v, Eigen::Index group) {
  RealVector out(v.size());
  for (Eigen::Index start = 0; start < v.size(); start += group) {
    out.segment(start, group) = project_l1_ball(v.segment(start, group));
  }
  return out;
}

struct AscentResult {
  RealVector x;
  double value = -std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
  std::vector<double> history;  // objective after each accepted iteration
};

/// Projected gradient ascent over a product of unit l1 balls with
/// backtracking: the step halves until the objective does not decrease, and
/// doubles (up to the initial step) after each accepted move. Converged when
/// the projected gradient mapping |x_next - x| / step drops below tolerance.
template <class Value, class Gradient>
AscentResult projected_gradient_ascent(Value&& value, Gradient&& gradient, const RealVector& start, Eigen::Index group,
                                       const OptimizerSettings& settings, bool record_history = false) {
  AscentResult r;
  r.x = project_l1_groups(start, group);
  r.value = value(r.x);
  if (!std::isfinite(r.value)) return r;
  double step = settings.step_size;
  for (r.iterations = 0; r.iterations < settings.max_iterations; ++r.iterations) {
    const RealVector g = gradient(r.x);
    RealVector next;
    double next_value = -std::numeric_limits<double>::infinity();
    int halvings = 0;
    for (; halvings < 80; ++halvings) {
      next = project_l1_groups(r.x + step * g, group);
      next_value = value(next);
      if (next_value >= r.value) break;
      step *= 0.5;
    }
    if (!(next_value >= r.value)) {
      r.converged = true;  // no ascent direction at any resolvable step
      break;
    }
    const double mapping = (next - r.x).norm() / step;
    r.x = std::move(next);
    r.value = next_value;
    if (record_history) r.history.push_back(r.value);
    if (mapping <= settings.tolerance) {
      r.converged = true;
      ++r.iterations;
      break;
    }
    step = std::min(2.0 * step, settings.step_size);
  }
  return r;
}

/// Grid points of [-1, 1]^dim with `points` values per axis, restricted to
/// the unit l1 ball, in odometer order (first coordinate fastest).
inline std::vector<RealVector> l1_grid(int dim, int points) {
  if (dim < 1 || points < 2) throw InvalidArgumentError("l1_grid needs dim >= 1 and points >= 2");
  const auto coord = [&](int k) { return -1.0 + 2.0 * k / (points - 1); };
  std::vector<RealVector> out;
  RealVector p(dim);
  // Coordinates are filled from the last axis down so the first varies fastest.
  const auto fill = [&](auto&& self, int axis, double used) -> void {
    if (axis < 0) {
      out.push_back(p);
      return;
    }
    for (int k = 0; k < points; ++k) {
      const double v = coord(k);
      if (used + std::abs(v) > 1.0 + 1e-12) continue;
      p[axis] = v;
      self(self, axis - 1, used + std::abs(v));
    }
  };
  fill(fill, dim - 1, 0.0);
  return out;
}

namespace detail {

/// Pulls a grid point toward the origin and jitters it so each group stays
/// inside its l1 ball; projecting a jittered boundary point could otherwise
/// snap two columns onto the same vertex.
inline RealVector jittered(const RealVector& p, Eigen::Index group, std::uint64_t seed, std::uint64_t start_index,
                           double width) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(start_index), static_cast<std::uint32_t>(start_index >> 32)};
  std::mt19937_64 rng(seq);
  RealVector out = (1.0 - static_cast<double>(group) * width) * p;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    // 53-bit uniform in [0, 1); avoids implementation-defined distributions.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    out[i] += width * (2.0 * u - 1.0);
  }
  return out;
}

inline bool lexicographically_less(const RealVector& a, const RealVector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

inline void require_strict_contraction(std::span<const double> lambdas) {
  for (double l : lambdas) {
    if (!(std::abs(l) < 1.0)) {
      throw SingularInformationError("|lambda| = " + std::to_string(std::abs(l)) +
                                     " >= 1 makes the Fisher information unbounded");
    }
  }
}

struct MultiStartOutcome {
  std::size_t best = 0;
  std::vector<AscentResult> runs;
  int converged = 0;
  int agreeing = 0;
};

/// Runs `ascend(start_index)` for every start and merges deterministically:
/// largest value wins, exact ties go to the lexicographically smallest x.
template <class Ascend>
MultiStartOutcome multi_start(std::size_t starts, const OptimizerSettings& settings, Ascend&& ascend) {
  MultiStartOutcome out;
  out.runs.resize(starts);
  parallel_for(starts, settings.threads, [&](std::size_t i) { out.runs[i] = ascend(i); });
  for (std::size_t i = 1; i < starts; ++i) {
    const auto& cand = out.runs[i];
    const auto& best = out.runs[out.best];
    if (cand.value > best.value || (cand.value == best.value && lexicographically_less(cand.x, best.x))) out.best = i;
  }
  const double best_value = out.runs[out.best].value;
  const double band = settings.tolerance * std::max(1.0, std::abs(best_value));
  for (const auto& r : out.runs) {
    if (r.converged) ++out.converged;
    if (std::abs(r.value - best_value) <= band) ++out.agreeing;
  }
  return out;
}

}  // namespace detail

struct OptimizationResult {
  ConfigurationSet best_set;
  Eigen::Matrix3d best_c = Eigen::Matrix3d::Zero();
  double best_value = 0.0;  // det F^Sigma
  bool converged = false;   // the best start reached stationarity
  int starts_agreeing = 0;
  int starts_converged = 0;
  int total_starts = 0;
  bool degenerate_lambdas = false;  // some |lambda_i| coincide
  bool cptp_valid = true;
  std::vector<double> endpoint_values;  // det F^Sigma per start, start order
  std::vector<Eigen::Matrix3d> endpoint_c;  // final c-matrix per start
  std::vector<char> endpoint_converged;
};

/// Multi-start projected gradient ascent of det F^Sigma over the c-matrix:
/// 9 variables, each column constrained to the unit l1 ball. Ascent runs on
/// log det F^Sigma = 2 log|det C| - sum_j log(1 - (lambda . c^(j))^2), which
/// has the same maximizers.
inline OptimizationResult maximize_det_fisher(const Eigen::Vector3d& lambdas, const OptimizerSettings& settings = {}) {
  settings.validate();
  detail::require_strict_contraction(std::span<const double>(lambdas.data(), 3));
  OptimizationResult result;
  const Eigen::Vector3d mags = lambdas.cwiseAbs();
  result.degenerate_lambdas = mags[0] == mags[1] || mags[1] == mags[2] || mags[0] == mags[2];
  result.cptp_valid = validate_cptp(std::span<const double>(lambdas.data(), 3), 2).valid;

  const auto to_matrix = [](const RealVector& x) { return Eigen::Map<const Eigen::Matrix3d>(x.data()); };
  const auto log_value = [&](const RealVector& x) {
    const Eigen::Matrix3d c = to_matrix(x);
    const double det = c.determinant();
    if (det == 0.0) return -std::numeric_limits<double>::infinity();
    double v = 2.0 * std::log(std::abs(det));
    for (int j = 0; j < 3; ++j) {
      const double s = lambdas.dot(c.col(j));
      v -= std::log(1.0 - s * s);
    }
    return v;
  };
  const auto log_gradient = [&](const RealVector& x) {
    const Eigen::Matrix3d c = to_matrix(x);
    Eigen::Matrix3d g = 2.0 * c.inverse().transpose();
    for (int j = 0; j < 3; ++j) {
      const double s = lambdas.dot(c.col(j));
      g.col(j) += (2.0 * s / (1.0 - s * s)) * lambdas;
    }
    return RealVector(Eigen::Map<const RealVector>(g.data(), 9));
  };

  const auto column_grid = l1_grid(3, settings.grid_points_per_axis);
  const std::size_t per_column = column_grid.size();
  const std::size_t starts = per_column * per_column * per_column;
  auto outcome = detail::multi_start(starts, settings, [&](std::size_t index) {
    RealVector x0(9);
    x0.segment<3>(0) = column_grid[index % per_column];
    x0.segment<3>(3) = column_grid[(index / per_column) % per_column];
    x0.segment<3>(6) = column_grid[index / (per_column * per_column)];
    x0 = detail::jittered(x0, 3, settings.seed, index, settings.start_jitter);
    return projected_gradient_ascent(log_value, log_gradient, x0, 3, settings);
  });

  result.total_starts = static_cast<int>(starts);
  result.starts_converged = outcome.converged;
  result.endpoint_values.reserve(starts);
  result.endpoint_c.reserve(starts);
  result.endpoint_converged.reserve(starts);
  for (const auto& r : outcome.runs) {
    result.endpoint_values.push_back(std::isfinite(r.value) ? det_fisher_from_c(lambdas, to_matrix(r.x)) : 0.0);
    result.endpoint_c.emplace_back(to_matrix(r.x));
    result.endpoint_converged.push_back(r.converged ? 1 : 0);
  }
  const auto& best = outcome.runs[outcome.best];
  result.best_c = to_matrix(best.x);
  result.best_value = det_fisher_from_c(lambdas, result.best_c);
  result.best_set = ConfigurationSet::from_c_matrix(result.best_c);
  result.converged = best.converged;
  const double band = settings.tolerance * std::max(1.0, result.best_value);
  result.starts_agreeing = static_cast<int>(std::count_if(
      result.endpoint_values.begin(), result.endpoint_values.end(),
      [&](double v) { return std::abs(v - result.best_value) <= band; }));
  return result;
}

struct BlockFisherOptimum {
  RealVector c;
  double value = 0.0;  // F_jj
  bool converged = false;
  int starts_agreeing = 0;
  int total_starts = 0;
};

/// Maximizes F_jj = c_j^2 / (1 - (lambda . c)^2) over the unit l1 ball in
/// dimension lambdas.size(). The optimum |c_j| = 1 with value
/// 1 / (1 - lambda_j^2) does not depend on that dimension.
inline BlockFisherOptimum maximize_block_fisher(std::span<const double> lambdas, std::size_t j,
                                                const OptimizerSettings& settings = {}) {
  settings.validate();
  if (j >= lambdas.size()) throw InvalidArgumentError("block index out of range");
  detail::require_strict_contraction(lambdas);
  const RealVector lam = Eigen::Map<const RealVector>(lambdas.data(), static_cast<Eigen::Index>(lambdas.size()));
  const auto jj = static_cast<Eigen::Index>(j);
  const auto log_value = [&](const RealVector& c) {
    if (c[jj] == 0.0) return -std::numeric_limits<double>::infinity();
    const double s = lam.dot(c);
    return 2.0 * std::log(std::abs(c[jj])) - std::log(1.0 - s * s);
  };
  const auto log_gradient = [&](const RealVector& c) {
    const double s = lam.dot(c);
    RealVector g = (2.0 * s / (1.0 - s * s)) * lam;
    g[jj] += 2.0 / c[jj];
    return g;
  };
  const auto grid = l1_grid(static_cast<int>(lambdas.size()), settings.grid_points_per_axis);
  auto outcome = detail::multi_start(grid.size(), settings, [&](std::size_t index) {
    const RealVector x0 = detail::jittered(grid[index], grid[index].size(), settings.seed, index, settings.start_jitter);
    return projected_gradient_ascent(log_value, log_gradient, x0, x0.size(), settings);
  });
  const auto& best = outcome.runs[outcome.best];
  BlockFisherOptimum out;
  out.c = best.x;
  const double s = lam.dot(best.x);
  out.value = best.x[jj] * best.x[jj] / (1.0 - s * s);
  out.converged = best.converged;
  out.starts_agreeing = outcome.agreeing;
  out.total_starts = static_cast<int>(grid.size());
  return out;
}

/// One configuration at a time: each step maximizes Tr F over the unit l1
/// ball restricted to the directions not chosen so far (m_i = theta_i = 0
/// on chosen ones), then fixes the dominant coordinate of the optimum.
inline ConfigurationSet greedy_sequential_configuration(const Eigen::Vector3d& lambdas,
                                                        const OptimizerSettings& settings = {}) {
  settings.validate();
  detail::require_strict_contraction(std::span<const double>(lambdas.data(), 3));
  std::vector<int> free_axes{0, 1, 2};
  Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
  for (int step = 0; step < 3; ++step) {
    const auto k = static_cast<Eigen::Index>(free_axes.size());
    RealVector lam(k);
    for (Eigen::Index i = 0; i < k; ++i) lam[i] = lambdas[free_axes[static_cast<std::size_t>(i)]];
    const auto log_value = [&](const RealVector& x) {
      const double sq = x.squaredNorm();
      if (sq == 0.0) return -std::numeric_limits<double>::infinity();
      const double s = lam.dot(x);
      return std::log(sq) - std::log(1.0 - s * s);
    };
    const auto log_gradient = [&](const RealVector& x) {
      const double s = lam.dot(x);
      return RealVector((2.0 / x.squaredNorm()) * x + (2.0 * s / (1.0 - s * s)) * lam);
    };
    const auto grid = l1_grid(static_cast<int>(k), settings.grid_points_per_axis);
    auto outcome = detail::multi_start(grid.size(), settings, [&](std::size_t index) {
      const RealVector x0 =
          detail::jittered(grid[index], k, settings.seed + static_cast<std::uint64_t>(step), index, settings.start_jitter);
      return projected_gradient_ascent(log_value, log_gradient, x0, k, settings);
    });
    const RealVector& best = outcome.runs[outcome.best].x;
    Eigen::Index dominant = 0;
    best.cwiseAbs().maxCoeff(&dominant);
    for (Eigen::Index i = 0; i < k; ++i) c(free_axes[static_cast<std::size_t>(i)], step) = best[i];
    free_axes.erase(free_axes.begin() + dominant);
  }
  return ConfigurationSet::from_c_matrix(c);
}

}  // namespace paulest
