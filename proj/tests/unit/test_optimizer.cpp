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

#include "paulest/optimizer.hpp"
#include "support/oracles.hpp"

using namespace paulest;

namespace {

bool is_signed_permutation(const Eigen::Matrix3d& c, double tol) {
  for (int j = 0; j < 3; ++j) {
    int big = 0;
    for (int i = 0; i < 3; ++i) {
      if (std::abs(std::abs(c(i, j)) - 1.0) <= tol) {
        ++big;
      } else if (std::abs(c(i, j)) > tol) {
        return false;
      }
    }
    if (big != 1) return false;
  }
  return std::abs(std::abs(c.determinant()) - 1.0) <= 3 * tol;
}

}  // namespace

TEST(Optimizer, L1ProjectionInsideIsIdentity) {
  const RealVector v = Eigen::Vector3d(0.2, -0.3, 0.1);
  EXPECT_EQ(project_l1_ball(v), v);
}

TEST(Optimizer, L1ProjectionKnownValue) {
  const RealVector v = Eigen::Vector3d(2.0, 0.5, -0.2);
  EXPECT_TRUE(project_l1_ball(v).isApprox(Eigen::Vector3d(1.0, 0.0, 0.0)));
  const RealVector w = Eigen::Vector3d(1.0, 1.0, 0.0);
  EXPECT_TRUE(project_l1_ball(w).isApprox(Eigen::Vector3d(0.5, 0.5, 0.0)));
}

TEST(Optimizer, L1ProjectionIsNearestPointProperty) {
  oracle::Gen gen(41);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + trial % 6;
    RealVector v(d);
    for (auto& x : v) x = 2.0 * gen.normal();
    const RealVector p = project_l1_ball(v);
    EXPECT_LE(p.cwiseAbs().sum(), 1.0 + 1e-12);
    const double dist = (v - p).norm();
    for (int k = 0; k < 50; ++k) EXPECT_LE(dist, (v - gen.l1_ball(d)).norm() + 1e-12);
  }
}

TEST(Optimizer, L1Grid) {
  const auto g = l1_grid(3, 5);
  EXPECT_EQ(g.size(), 25u);
  for (const auto& p : g) EXPECT_LE(p.cwiseAbs().sum(), 1.0 + 1e-12);
  // |k_1| + ... + |k_15| <= 2 in half steps: 1 + 15*2 + 15*2 + C(15,2)*4.
  EXPECT_EQ(l1_grid(15, 5).size(), 481u);
  EXPECT_EQ(l1_grid(2, 3).size(), 5u);
  EXPECT_THROW(l1_grid(3, 1), InvalidArgumentError);
}

TEST(Optimizer, AscentHistoryIsMonotone) {
  const Eigen::Vector3d target(0.3, -0.9, 0.6);
  const auto value = [&](const RealVector& x) { return -(x - RealVector(target)).squaredNorm(); };
  const auto gradient = [&](const RealVector& x) { return RealVector(-2.0 * (x - RealVector(target))); };
  OptimizerSettings s;
  const auto r = projected_gradient_ascent(value, gradient, RealVector(Eigen::Vector3d(0.9, 0.0, 0.0)), 3, s, true);
  EXPECT_TRUE(r.converged);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_GE(r.history[i], r.history[i - 1]);
  EXPECT_LT((r.x - project_l1_ball(RealVector(target))).norm(), 1e-6);
}

TEST(Optimizer, DetFisherFindsSignedPermutation) {
  const Eigen::Vector3d l(0.75, 0.5, 0.25);
  const auto r = maximize_det_fisher(l);
  EXPECT_EQ(r.total_starts, 15625);
  EXPECT_EQ(r.starts_converged, r.total_starts);
  EXPECT_NEAR(r.best_value, 1024.0 / 315.0, 1e-6);
  EXPECT_TRUE(is_signed_permutation(r.best_c, 1e-6));
  EXPECT_TRUE(r.cptp_valid);
  EXPECT_FALSE(r.degenerate_lambdas);
}

TEST(Optimizer, ThreadCountDoesNotChangeResult) {
  OptimizerSettings s;
  s.grid_points_per_axis = 3;
  s.seed = 5;
  const Eigen::Vector3d l(0.6, -0.45, 0.2);
  const auto serial = maximize_det_fisher(l, s);
  s.threads = 4;
  const auto parallel = maximize_det_fisher(l, s);
  EXPECT_EQ(serial.best_c, parallel.best_c);
  EXPECT_EQ(serial.best_value, parallel.best_value);
  EXPECT_EQ(serial.endpoint_values, parallel.endpoint_values);
}

TEST(Optimizer, FlagsDegenerateAndNonPhysicalLambdas) {
  OptimizerSettings s;
  s.grid_points_per_axis = 3;
  const auto r = maximize_det_fisher({0.5, -0.5, 0.2}, s);
  EXPECT_TRUE(r.degenerate_lambdas);
  EXPECT_NEAR(r.best_value, oracle::axis_det({0.5, 0.5, 0.2}), 1e-6);
  const auto q = maximize_det_fisher({0.9, 0.6, 0.3}, s);
  EXPECT_FALSE(q.cptp_valid);
  EXPECT_NEAR(q.best_value, 9.037016, 1e-5);
}

TEST(Optimizer, RejectsUnitContraction) {
  EXPECT_THROW(maximize_det_fisher({1.0, 0.5, 0.2}), SingularInformationError);
  OptimizerSettings bad;
  bad.tolerance = 0.0;
  EXPECT_THROW(maximize_det_fisher({0.5, 0.3, 0.2}, bad), InvalidArgumentError);
  bad = {};
  bad.grid_points_per_axis = 1;
  EXPECT_THROW(maximize_det_fisher({0.5, 0.3, 0.2}, bad), InvalidArgumentError);
}

TEST(Optimizer, BlockFisherMaximumIsIndependentOfLength) {
  const std::vector<double> l3{0.75, 0.5, 0.25};
  for (std::size_t j = 0; j < 3; ++j) {
    const auto r = maximize_block_fisher(l3, j);
    EXPECT_NEAR(r.value, 1.0 / (1.0 - l3[j] * l3[j]), 1e-8);
    EXPECT_NEAR(std::abs(r.c[static_cast<Eigen::Index>(j)]), 1.0, 1e-6);
  }
  const std::vector<double> l15{0.5, 0.45, 0.4, 0.35, 0.3, 0.25, 0.2, 0.15, 0.1, 0.05, 0.0, -0.02, -0.04, -0.05, -0.06};
  OptimizerSettings s;
  s.grid_points_per_axis = 3;
  const auto r = maximize_block_fisher(l15, 4, s);
  EXPECT_NEAR(r.value, 1.0 / (1.0 - 0.09), 1e-8);
}

TEST(Optimizer, GreedyPicksDominantAxisFirst) {
  const Eigen::Vector3d l(0.3, -0.8, 0.5);
  const auto set = greedy_sequential_configuration(l);
  const auto c = set.c_matrix();
  EXPECT_NEAR(std::abs(c(1, 0)), 1.0, 1e-6);
  EXPECT_NEAR(total_fisher_trace(l, set.configs[0]), 1.0 / (1.0 - 0.64), 1e-6);
  EXPECT_NEAR(std::abs(c(2, 1)), 1.0, 1e-6);
  EXPECT_NEAR(std::abs(c(0, 2)), 1.0, 1e-6);
  EXPECT_NEAR(total_fisher_det(l, set), oracle::axis_det(l), 1e-5);
}
