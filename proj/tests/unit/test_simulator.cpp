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

#include <cmath>
#include <numbers>

#include "paulest/simulator.hpp"
#include "support/oracles.hpp"

using namespace paulest;

namespace {

double binomial_cdf(std::int64_t k, std::int64_t n, double p) {
  double total = 0.0;
  for (std::int64_t i = 0; i <= k; ++i) {
    total += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) + i * std::log(p) +
                      (n - i) * std::log1p(-p));
  }
  return total;
}

// Empirical CDF at a few quantiles against the exact CDF, within 5 standard errors.
void check_binomial_cdf(std::int64_t n, double p, std::uint64_t seed) {
  constexpr int draws = 20000;
  RandomStream rng(seed, 0);
  std::vector<std::int64_t> samples(draws);
  for (auto& s : samples) s = sample_binomial(rng, n, p);
  const double mean = n * p, sd = std::sqrt(n * p * (1 - p));
  for (double z : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
    const auto k = static_cast<std::int64_t>(std::floor(mean + z * sd));
    const double exact = binomial_cdf(k, n, p);
    const double empirical =
        static_cast<double>(std::count_if(samples.begin(), samples.end(), [&](auto s) { return s <= k; })) / draws;
    EXPECT_NEAR(empirical, exact, 5.0 * std::sqrt(exact * (1 - exact) / draws)) << "n=" << n << " p=" << p << " k=" << k;
  }
}

ExperimentSpec base_spec() {
  ExperimentSpec spec;
  spec.truth = {{0.75, 0.5, 0.25}, {0, 0, 0}};
  spec.shots_per_cell = 10000;
  spec.repetitions = 1000;
  spec.seed = 17;
  return spec;
}

}  // namespace

TEST(Random, StreamsAreReproducibleAndDistinct) {
  RandomStream a(1, 2), b(1, 2), c(1, 3), d(2, 2);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
    EXPECT_NE(x, d.next());
  }
}

TEST(Random, UniformRange) {
  RandomStream rng(3, 0);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Random, BinomialEdgeCases) {
  RandomStream rng(4, 0);
  EXPECT_EQ(sample_binomial(rng, 0, 0.3), 0);
  EXPECT_EQ(sample_binomial(rng, 50, 0.0), 0);
  EXPECT_EQ(sample_binomial(rng, 50, 1.0), 50);
  EXPECT_THROW(sample_binomial(rng, -1, 0.3), InvalidArgumentError);
  EXPECT_THROW(sample_binomial(rng, 10, 1.5), InvalidArgumentError);
}

TEST(Random, BinomialDistributionBothBranches) {
  check_binomial_cdf(20, 0.3, 5);
  check_binomial_cdf(1000, 0.875, 6);
  check_binomial_cdf(1001, 0.875, 7);
  check_binomial_cdf(20000, 0.42, 8);
  check_binomial_cdf(100000, 0.03, 9);
}

TEST(Random, BinomialStandardDeviation) {
  RandomStream rng(10, 0);
  constexpr int draws = 5000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double nu = sample_binomial(rng, 10000, 0.875) / 1e4;
    sum += nu;
    sq += nu * nu;
  }
  const double mean = sum / draws;
  const double sd = std::sqrt(sq / draws - mean * mean);
  EXPECT_NEAR(sd, 3.307e-3, 3.307e-3 * 0.05);
  EXPECT_NEAR(mean, 0.875, 5 * 3.307e-3 / std::sqrt(draws));
}

TEST(Random, LargeShotConcentration) {
  RandomStream rng(11, 0);
  const QubitPauliChannel truth{{0.75, 0.5, 0.25}, {0.2, 0.1, -0.3}};
  const Eigen::Matrix3d m = direction_rotation({0.5, 0.3, 0.2});
  const auto f = sample_frequencies(truth, Eigen::Matrix3d::Identity(), m, 1000000, rng);
  const auto p = direction_probabilities(truth, Eigen::Matrix3d::Identity(), m);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_LE(std::abs(f.nu(i, j) - p(i, j)), 5 * std::sqrt(p(i, j) * (1 - p(i, j)) / 1e6));
}

TEST(Simulator, SampleFrequenciesRejectsNonPhysicalModel) {
  RandomStream rng(12, 0);
  const QubitPauliChannel bad{{1.5, 0.5, 0.5}, {0, 0, 0}};
  EXPECT_THROW(sample_frequencies(bad, Eigen::Matrix3d::Identity(), Eigen::Matrix3d::Identity(), 100, rng),
               InvalidModelError);
}

TEST(Simulator, HaarRotation) {
  RandomStream rng(13, 0);
  Eigen::Matrix3d mean = Eigen::Matrix3d::Zero();
  double second = 0.0;
  constexpr int draws = 4000;
  for (int i = 0; i < draws; ++i) {
    const auto r = haar_rotation(rng);
    ASSERT_LT((r * r.transpose() - Eigen::Matrix3d::Identity()).norm(), 1e-12);
    ASSERT_NEAR(r.determinant(), 1.0, 1e-12);
    mean += r;
    second += r(0, 0) * r(0, 0);
  }
  EXPECT_LT((mean / draws).cwiseAbs().maxCoeff(), 0.05);
  EXPECT_NEAR(second / draws, 1.0 / 3.0, 0.02);
}

TEST(Simulator, ConeTriple) {
  const auto ortho = cone_triple(std::numbers::pi / 2);
  EXPECT_LT((ortho.transpose() * ortho - Eigen::Matrix3d::Identity()).norm(), 1e-12);
  EXPECT_NEAR(ortho.determinant(), 1.0, 1e-12);
  double previous = -1.0;
  for (int deg = 5; deg <= 90; deg += 5) {
    const double a = deg * std::numbers::pi / 180;
    const auto t = cone_triple(a);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(t.col(j).norm(), 1.0, 1e-14);
    EXPECT_NEAR(t.col(0).dot(t.col(1)), std::cos(a), 1e-12);
    EXPECT_NEAR(t.col(1).dot(t.col(2)), std::cos(a), 1e-12);
    EXPECT_GT(t.determinant(), previous);
    previous = t.determinant();
  }
  EXPECT_NEAR(cone_triple(0.0).determinant(), 0.0, 1e-12);
}

TEST(Simulator, LambdaMseMatchesDeltaMethod) {
  const auto spec = base_spec();
  const auto report = run_monte_carlo(spec);
  EXPECT_EQ(report.failures, 0);
  for (int i = 0; i < 3; ++i) {
    // lambda-hat_i = 2 nu_ii - 1 to first order: variance 4 P (1 - P) / N = (1 - lambda_i^2) / N.
    const double l = spec.truth.lambdas[i];
    const double expected = (1.0 - l * l) / static_cast<double>(spec.shots_per_cell);
    EXPECT_NEAR(report.per_parameter[static_cast<std::size_t>(i)], expected, 0.2 * expected) << i;
    const double se = std::sqrt(expected / spec.repetitions);
    EXPECT_NEAR(report.mean_estimate[static_cast<std::size_t>(i)], l, 4 * se) << i;
  }
  for (double m : report.per_parameter) EXPECT_TRUE(std::isfinite(m));
}

TEST(Simulator, MseShrinksWithShots) {
  auto spec = base_spec();
  spec.repetitions = 400;
  spec.shots_per_cell = 100;
  const auto coarse = run_monte_carlo(spec);
  spec.shots_per_cell = 10000;
  const auto fine = run_monte_carlo(spec);
  for (std::size_t k = 0; k < 6; ++k) EXPECT_LT(fine.per_parameter[k], coarse.per_parameter[k] / 20) << k;
}

TEST(Simulator, DeterministicAcrossThreadCounts) {
  auto spec = base_spec();
  spec.repetitions = 300;
  spec.random_measurement = true;
  const auto serial = run_monte_carlo(spec);
  spec.threads = 4;
  const auto parallel = run_monte_carlo(spec);
  EXPECT_EQ(serial.per_parameter, parallel.per_parameter);
  EXPECT_EQ(serial.mean_estimate, parallel.mean_estimate);
  EXPECT_EQ(serial.objective_v, parallel.objective_v);
}

TEST(Simulator, SingleTrialIsReproducible) {
  auto spec = base_spec();
  spec.repetitions = 1;
  const auto a = run_monte_carlo(spec);
  const auto b = run_monte_carlo(spec);
  EXPECT_EQ(a.per_parameter, b.per_parameter);
  spec.seed = 18;
  EXPECT_NE(run_monte_carlo(spec).per_parameter, a.per_parameter);
}

TEST(Simulator, RandomMeasurementIsFixedBySeed) {
  auto spec = base_spec();
  spec.random_measurement = true;
  const auto m1 = resolved_measurement_triple(spec);
  EXPECT_EQ(m1, resolved_measurement_triple(spec));
  spec.seed = 99;
  EXPECT_NE(m1, resolved_measurement_triple(spec));
}

TEST(Simulator, OrthogonalitySweepSkipsSingularTriples) {
  auto spec = base_spec();
  spec.repetitions = 200;
  spec.shots_per_cell = 1000;
  const auto table = sweep_orthogonality(spec, {0.0, 30.0, 90.0});
  ASSERT_EQ(table.rows.size(), 2u);
  ASSERT_EQ(table.skipped_angles_deg.size(), 1u);
  EXPECT_EQ(table.skipped_angles_deg[0], 0.0);
  EXPECT_GT(table.rows[0].report.objective_v, table.rows[1].report.objective_v);
  EXPECT_NEAR(table.rows[1].det, 1.0, 1e-12);
}

TEST(Simulator, ScalingSweepWeights) {
  auto spec = base_spec();
  spec.repetitions = 200;
  const auto table = sweep_scaling(spec, {1000, 4000}, {0.0, 0.5, 1.0});
  ASSERT_EQ(table.rows.size(), 6u);
  ASSERT_EQ(table.reports.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    const double mid = 0.5 * (table.rows[k].objective_v + table.rows[4 + k].objective_v);
    EXPECT_NEAR(table.rows[2 + k].objective_v, mid, 1e-15);
    EXPECT_LT(table.rows[k].objective_v, table.rows[4 + k].objective_v);
    EXPECT_EQ(table.rows[k].n_times_v, table.rows[k].shots * table.rows[k].objective_v);
  }
  EXPECT_THROW(sweep_scaling(spec, {4000, 1000}, {0.5}), InvalidArgumentError);
  EXPECT_THROW(sweep_scaling(spec, {1000}, {1.5}), InvalidArgumentError);
}

TEST(Simulator, SpecValidation) {
  auto spec = base_spec();
  spec.repetitions = 0;
  EXPECT_THROW(run_monte_carlo(spec), InvalidArgumentError);
  spec = base_spec();
  spec.weight = -0.1;
  EXPECT_THROW(run_monte_carlo(spec), InvalidArgumentError);
  spec = base_spec();
  spec.input_triple.col(2) = spec.input_triple.col(0);
  EXPECT_THROW(run_monte_carlo(spec), SingularMatrixError);
}
