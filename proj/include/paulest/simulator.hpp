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
#include <climits>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "paulest/channel.hpp"
#include "paulest/errors.hpp"
#include "paulest/estimator.hpp"
#include "paulest/parallel.hpp"
#include "paulest/random.hpp"

namespace paulest {

/// Input triples spread on a cone, pairwise angle swept over `angles_deg`.
struct OrthogonalitySweep {
  std::vector<double> angles_deg;
};

/// run_monte_carlo for every shot count, reported for every weight c.
struct ScalingSweep {
  std::vector<std::int64_t> shots;
  std::vector<double> weights;
};

struct ExperimentSpec {
  QubitPauliChannel truth;
  Eigen::Matrix3d input_triple = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d measurement_triple = Eigen::Matrix3d::Identity();
  /// Replace measurement_triple by a Haar-random rotation drawn from `seed`.
  bool random_measurement = false;
  std::int64_t shots_per_cell = 1000;  // N, the same for every (i, j)
  int repetitions = 1000;              // K
  double weight = 0.5;                 // c
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::variant<std::monostate, OrthogonalitySweep, ScalingSweep> sweep;

  void validate() const {
    if (shots_per_cell < 1) throw InvalidArgumentError("shots per cell must be >= 1");
    if (repetitions < 1) throw InvalidArgumentError("repetitions must be >= 1");
    if (!(weight >= 0.0 && weight <= 1.0)) throw InvalidArgumentError("weight c must lie in [0, 1]");
    if (!random_measurement) require_invertible_triple(measurement_triple, "measurement");
    if (std::holds_alternative<std::monostate>(sweep) || std::holds_alternative<ScalingSweep>(sweep)) {
      require_invertible_triple(input_triple, "input");
    }
  }
};

/// Haar-uniform proper rotation: QR of a Gaussian matrix with the sign of
/// R's diagonal moved into Q, then a column flip if det = -1.
inline Eigen::Matrix3d haar_rotation(RandomStream& rng) {
  Eigen::Matrix3d g;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
  Eigen::Matrix3d q = qr.householderQ();
  const Eigen::Matrix3d r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 3; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  if (q.determinant() < 0.0) q.col(2) *= -1.0;
  return q;
}

/// The measurement triple a spec resolves to.
inline Eigen::Matrix3d resolved_measurement_triple(const ExperimentSpec& spec) {
  if (!spec.random_measurement) return spec.measurement_triple;
  RandomStream rng(spec.seed, ~std::uint64_t{0});
  return haar_rotation(rng);
}

/// Three unit vectors symmetric about (1,1,1)/sqrt(3) with pairwise angle
/// `angle_rad`, oriented so the determinant is non-negative. At 90 degrees
/// they are orthonormal.
inline Eigen::Matrix3d cone_triple(double angle_rad) {
  const Eigen::Vector3d axis = Eigen::Vector3d::Ones().normalized();
  const Eigen::Vector3d w1 = Eigen::Vector3d(1.0, -1.0, 0.0).normalized();
  const Eigen::Vector3d w2 = axis.cross(w1);
  const double sin2 = std::clamp((2.0 / 3.0) * (1.0 - std::cos(angle_rad)), 0.0, 1.0);
  const double sb = std::sqrt(sin2), cb = std::sqrt(1.0 - sin2);
  Eigen::Matrix3d triple;
  for (int k = 0; k < 3; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 3.0;
    triple.col(k) = cb * axis + sb * (std::cos(t) * w1 + std::sin(t) * w2);
  }
  if (triple.determinant() < 0.0) triple.col(1).swap(triple.col(2));
  return triple;
}

/// nu_ij = Binomial(N, P_ij) / N with P = (1 + M^T A theta) / 2.
inline FrequencyMatrix sample_frequencies(const QubitPauliChannel& truth, const Eigen::Matrix3d& input_triple,
                                          const Eigen::Matrix3d& measurement_triple, std::int64_t shots,
                                          RandomStream& rng) {
  if (shots < 1) throw InvalidArgumentError("shots must be >= 1");
  const Eigen::Matrix3d probs = direction_probabilities(truth, input_triple, measurement_triple);
  FrequencyMatrix freq;
  freq.counts.setConstant(static_cast<int>(std::min<std::int64_t>(shots, INT32_MAX)));
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      double p = probs(i, j);
      if (p < -1e-12 || p > 1.0 + 1e-12) {
        throw InvalidModelError("outcome probability P(" + std::to_string(i) + "," + std::to_string(j) +
                                ") = " + std::to_string(p) + " outside [0, 1]");
      }
      p = std::clamp(p, 0.0, 1.0);
      freq.nu(i, j) = static_cast<double>(sample_binomial(rng, shots, p)) / static_cast<double>(shots);
    }
  }
  return freq;
}

/// Empirical MSE per parameter (lambda_1..3, phi_1..3) over K trials and
/// V = (1 - c) sum MSE(lambda) + c sum MSE(phi).
struct MseReport {
  std::array<double, 6> per_parameter{};
  std::array<double, 6> mean_estimate{};
  std::array<double, 6> truth{};
  double objective_v = 0.0;
  double n_times_v = 0.0;
  std::int64_t shots = 0;
  double weight = 0.0;
  int trials = 0;
  int failures = 0;

  double lambda_mse_sum() const { return per_parameter[0] + per_parameter[1] + per_parameter[2]; }
  double angle_mse_sum() const { return per_parameter[3] + per_parameter[4] + per_parameter[5]; }
  double objective(double c) const { return (1.0 - c) * lambda_mse_sum() + c * angle_mse_sum(); }
};

/// Largest tolerated failed-trial fraction before a run aborts.
inline constexpr double kMaxFailureFraction = 0.01;

/// K seeded trials; trial t draws from stream (seed, t), and squared errors
/// are summed in trial order, so the report does not depend on threading.
inline MseReport run_monte_carlo(const ExperimentSpec& spec) {
  spec.validate();
  const Eigen::Matrix3d measurement = resolved_measurement_triple(spec);
  require_invertible_triple(measurement, "measurement");
  require_invertible_triple(spec.input_triple, "input");
  const auto truth = decompose_channel_matrix(qubit_affine_matrix(spec.truth));
  std::array<double, 6> truth_params{truth.lambdas[0], truth.lambdas[1], truth.lambdas[2],
                                     truth.angles[0],  truth.angles[1],  truth.angles[2]};

  struct Trial {
    bool ok = false;
    std::array<double, 6> estimate{};
  };
  std::vector<Trial> trials(static_cast<std::size_t>(spec.repetitions));
  parallel_for(trials.size(), spec.threads, [&](std::size_t t) {
    RandomStream rng(spec.seed, t);
    const auto freq = sample_frequencies(spec.truth, spec.input_triple, measurement, spec.shots_per_cell, rng);
    try {
      const auto est = full_direction_estimate(spec.input_triple, measurement, freq);
      trials[t].estimate = {est.lambdas[0], est.lambdas[1], est.lambdas[2],
                            est.angles[0],  est.angles[1],  est.angles[2]};
      trials[t].ok = true;
    } catch (const Error&) {
      trials[t].ok = false;
    }
  });

  MseReport report;
  report.truth = truth_params;
  report.shots = spec.shots_per_cell;
  report.weight = spec.weight;
  report.trials = spec.repetitions;
  std::array<double, 6> sq{}, sum{};
  int ok = 0;
  for (const auto& trial : trials) {
    if (!trial.ok) {
      ++report.failures;
      continue;
    }
    ++ok;
    for (std::size_t k = 0; k < 6; ++k) {
      const double diff = k < 3 ? trial.estimate[k] - truth_params[k] : wrap_angle(trial.estimate[k] - truth_params[k]);
      sq[k] += diff * diff;
      sum[k] += trial.estimate[k];
    }
  }
  if (report.failures > kMaxFailureFraction * spec.repetitions || ok == 0) {
    throw TrialFailureError("Monte Carlo run aborted: " + std::to_string(report.failures) + " of " +
                std::to_string(spec.repetitions) + " trials failed");
  }
  for (std::size_t k = 0; k < 6; ++k) {
    report.per_parameter[k] = sq[k] / ok;
    report.mean_estimate[k] = sum[k] / ok;
  }
  report.objective_v = report.objective(spec.weight);
  report.n_times_v = static_cast<double>(spec.shots_per_cell) * report.objective_v;
  return report;
}

struct OrthogonalityRow {
  double angle_deg = 0.0;
  double det = 0.0;
  MseReport report;
};

struct OrthogonalityTable {
  std::vector<OrthogonalityRow> rows;
  std::vector<double> skipped_angles_deg;  // |det| < 1e-6
  Eigen::Matrix3d measurement_triple = Eigen::Matrix3d::Identity();
};

/// One MseReport per cone angle at a fixed measurement triple. Every grid
/// point reuses the same trial streams.
inline OrthogonalityTable sweep_orthogonality(const ExperimentSpec& spec, const std::vector<double>& angles_deg) {
  spec.validate();
  OrthogonalityTable table;
  table.measurement_triple = resolved_measurement_triple(spec);
  ExperimentSpec point = spec;
  point.random_measurement = false;
  point.measurement_triple = table.measurement_triple;
  point.sweep = std::monostate{};
  for (double deg : angles_deg) {
    const Eigen::Matrix3d triple = cone_triple(deg * std::numbers::pi / 180.0);
    const double det = triple.determinant();
    if (std::abs(det) < 1e-6) {
      table.skipped_angles_deg.push_back(deg);
      continue;
    }
    point.input_triple = triple;
    table.rows.push_back({deg, det, run_monte_carlo(point)});
  }
  return table;
}

struct ScalingRow {
  double weight = 0.0;
  std::int64_t shots = 0;
  double objective_v = 0.0;
  double n_times_v = 0.0;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;           // grouped by weight, shots ascending
  std::vector<MseReport> reports;         // one per shot count
  Eigen::Matrix3d measurement_triple = Eigen::Matrix3d::Identity();
};

/// N * V over shot counts and weights. The per-parameter MSEs do not depend
/// on c, so each N is simulated once and weighted for every c.
inline ScalingTable sweep_scaling(const ExperimentSpec& spec, const std::vector<std::int64_t>& shots,
                                  const std::vector<double>& weights) {
  spec.validate();
  for (std::size_t i = 1; i < shots.size(); ++i) {
    if (shots[i] <= shots[i - 1]) throw InvalidArgumentError("shot counts must be strictly ascending");
  }
  for (double c : weights) {
    if (!(c >= 0.0 && c <= 1.0)) throw InvalidArgumentError("weight c must lie in [0, 1]");
  }
  ScalingTable table;
  table.measurement_triple = resolved_measurement_triple(spec);
  ExperimentSpec point = spec;
  point.random_measurement = false;
  point.measurement_triple = table.measurement_triple;
  point.sweep = std::monostate{};
  for (std::int64_t n : shots) {
    point.shots_per_cell = n;
    table.reports.push_back(run_monte_carlo(point));
  }
  for (double c : weights) {
    for (const auto& report : table.reports) {
      const double v = report.objective(c);
      table.rows.push_back({c, report.shots, v, static_cast<double>(report.shots) * v});
    }
  }
  return table;
}

}  // namespace paulest
