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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "paulest/errors.hpp"

namespace paulest {

/// Independent reproducible stream number `stream` of a master seed.
/// Streams are seeded through std::seed_seq, whose output is fixed by the
/// standard, so a trial draws the same numbers no matter which thread runs it.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x70617565u /* domain tag */};
    engine_.seed(seq);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal by Box-Muller.
  double normal() {
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

inline double binomial_log_pmf(std::int64_t k, std::int64_t n, double log_p, double log_q) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0) + static_cast<double>(k) * log_p +
         static_cast<double>(n - k) * log_q;
}

}  // namespace detail

/// Exact Binomial(n, p) draw by inversion of one uniform. For n <= 1000 the
/// CDF is walked upward from 0; above that the walk starts at the mode and
/// alternates outward, which keeps the expected work at O(sqrt(n p q)).
/// Both enumerate every outcome once, so both are exact inversions.
inline std::int64_t sample_binomial(RandomStream& rng, std::int64_t n, double p) {
  if (n < 0) throw InvalidArgumentError("binomial trial count must be non-negative");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgumentError("binomial probability outside [0, 1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  const bool flip = p > 0.5;
  const double pp = flip ? 1.0 - p : p;
  const double q = 1.0 - pp;
  const double ratio = pp / q;
  double u = rng.uniform();
  std::int64_t k = 0;
  if (n <= 1000) {
    double pmf = std::pow(q, static_cast<double>(n));
    while (true) {
      if (u < pmf || k == n) break;
      u -= pmf;
      pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
      ++k;
    }
  } else {
    const auto mode = static_cast<std::int64_t>(std::floor((static_cast<double>(n) + 1.0) * pp));
    const double mode_pmf = std::exp(detail::binomial_log_pmf(mode, n, std::log(pp), std::log(q)));
    k = mode;
    if (u < mode_pmf) return flip ? n - k : k;
    u -= mode_pmf;
    std::int64_t lo = mode, hi = mode;
    double lo_pmf = mode_pmf, hi_pmf = mode_pmf;
    while (true) {
      const bool can_down = lo > 0;
      const bool can_up = hi < n;
      if (!can_down && !can_up) {
        k = mode;  // rounding left u >= total mass; fall back to the mode
        break;
      }
      if (can_down) {
        // pmf(k-1) = pmf(k) * k / ((n - k + 1) * ratio)
        lo_pmf *= static_cast<double>(lo) / (static_cast<double>(n - lo + 1) * ratio);
        --lo;
        if (u < lo_pmf) {
          k = lo;
          break;
        }
        u -= lo_pmf;
      }
      if (can_up) {
        hi_pmf *= ratio * static_cast<double>(n - hi) / static_cast<double>(hi + 1);
        ++hi;
        if (u < hi_pmf) {
          k = hi;
          break;
        }
        u -= hi_pmf;
      }
    }
  }
  return flip ? n - k : k;
}

}  // namespace paulest
