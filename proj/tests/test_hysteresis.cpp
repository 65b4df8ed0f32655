// Copyright 2026 The qumem Authors
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

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "qumem/hysteresis.hpp"

namespace qumem::hysteresis {
namespace {

using memristor::MemristorState;

DriveConfig drive(double t_osc = 10.0, int periods = 3) {
  DriveConfig d;
  d.t_osc = t_osc;
  d.n_periods = periods;
  return d;
}

TEST(Regime, Classification) {
  EXPECT_EQ(classify_regime(0.1, 10), Regime::LowFreq);
  EXPECT_EQ(classify_regime(10, 10), Regime::HighFreq);
  EXPECT_EQ(classify_regime(3, 10), Regime::Intermediate);
  EXPECT_THROW(classify_regime(0, 10), DomainError);
}

TEST(Detector, ExactIsNormalisedRate) {
  DetectionConfig det;
  Detector d(det, 1e-2);
  EXPECT_NEAR(d.estimate(det.max_rate), 1.0, 1e-15);
  EXPECT_NEAR(d.estimate(0.25 * det.max_rate), 0.25, 1e-15);
  EXPECT_THROW(d.estimate(2 * det.max_rate), DomainError);
}

TEST(Detector, PoissonFilterMeanAndVariance) {
  DetectionConfig det;
  det.noise = Noise::Poisson;
  det.seed = 99;
  const double dt = 1e-2, rate = 1.2e4;
  Detector d(det, dt);
  for (int k = 0; k < 100; ++k) d.estimate(rate);  // 10 RC of settling
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double y = d.estimate(rate) * det.max_rate;
    sum += y;
    sq += y * y;
  }
  const double mean = sum / n, var = sq / n - mean * mean;
  const double expected_var = oracle::filtered_poisson_variance(rate, dt, det.rc);
  // Successive samples are correlated over ~RC/dt steps.
  const double eff = n / (2.0 * det.rc / dt);
  EXPECT_NEAR(mean, rate, 3.0 * std::sqrt(expected_var / eff));
  EXPECT_NEAR(var / expected_var, 1.0, 0.05);
}

TEST(Detector, SeededRunsAreReproducible) {
  DetectionConfig det;
  det.noise = Noise::Poisson;
  det.seed = 5;
  const auto mem = MemristorState::windowed(2.0);
  const auto a = run_closed_loop(drive(), mem, det), b = run_closed_loop(drive(), mem, det);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].n_out, b.rows[i].n_out);
}

TEST(ClosedLoop, LowFrequencyLimit) {
  const auto t = run_closed_loop(drive(), MemristorState::windowed(0.1), DetectionConfig{});
  EXPECT_LE(rms_deviation(t, nonlinear_limit), 0.02);
}

TEST(ClosedLoop, HighFrequencyLimit) {
  const auto t = run_closed_loop(drive(), MemristorState::windowed(10.0), DetectionConfig{});
  EXPECT_LE(rms_deviation(t, linear_limit), 0.02);
}

TEST(ClosedLoop, TraceInvariants) {
  for (double ratio : {0.05, 0.4, 1.0}) {
    const auto t = run_closed_loop(drive(), MemristorState::windowed(10.0 * ratio), DetectionConfig{});
    EXPECT_EQ(t.rows.size(), 3000u);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& r = t.rows[i];
      EXPECT_LE(r.n_out, r.n_in + 1e-15);
      EXPECT_GE(r.n_out, 0.0);
      if (i) EXPECT_GT(r.t, t.rows[i - 1].t);
      if (r.n_in == 0.0) EXPECT_EQ(r.n_out, 0.0);
    }
    EXPECT_LE(max_output_near_origin(t, 0.02), 0.02);
  }
}

TEST(ClosedLoop, FrozenLawIsALine) {
  const auto t = run_closed_loop(drive(), MemristorState::frozen(0.5), DetectionConfig{});
  EXPECT_LT(rms_deviation(t, linear_limit, 0), 1e-15);
  EXPECT_LT(orbit_area(t), 1e-12);
}

TEST(ClosedLoop, OrbitAreaVanishesInBothLimits) {
  std::vector<double> areas;
  for (double ratio : {0.005, 0.05, 0.2, 0.4, 0.6, 0.8, 1.0})
    areas.push_back(orbit_area(run_closed_loop(drive(), MemristorState::windowed(10.0 * ratio), DetectionConfig{})));
  const auto peak = std::max_element(areas.begin(), areas.end()) - areas.begin();
  for (long i = 1; i <= peak; ++i) EXPECT_GE(areas[i], areas[i - 1]) << i;
  for (std::size_t i = peak + 1; i < areas.size(); ++i) EXPECT_LE(areas[i], areas[i - 1]) << i;
  EXPECT_LT(areas.front(), 0.1 * areas[peak]);
  EXPECT_LT(areas.back(), 1e-3);
}

TEST(ClosedLoop, ConfigErrors) {
  DetectionConfig det;
  det.noise = Noise::Poisson;
  EXPECT_THROW(run_closed_loop(drive(), MemristorState::windowed(0.1), det), ConfigError);
  DriveConfig coarse = drive();
  coarse.dt = 1.0;
  EXPECT_THROW(run_closed_loop(coarse, MemristorState::windowed(1.0), DetectionConfig{}), ConfigError);
}

TEST(LowPassLoop, Limits) {
  const double f_cut = 4.62;
  const auto slow = run_lpf_loop(drive(1.0 / (f_cut / 46.2)), f_cut, DetectionConfig{});
  EXPECT_LE(rms_deviation(slow, nonlinear_limit), 0.03);
  const auto fast = run_lpf_loop(drive(1.0 / (20 * f_cut), 20), f_cut, DetectionConfig{});
  // A first-order filter leaves a ripple of relative size 1 / sqrt(1 + (f/f_cut)^2) on R.
  const double ripple = 0.5 / std::sqrt(1.0 + 400.0);
  EXPECT_LE(rms_deviation(fast, linear_limit, 10), ripple);
  const auto mid = run_lpf_loop(drive(1.0 / f_cut), f_cut, DetectionConfig{});
  EXPECT_GT(orbit_area(mid), 0.01);
  EXPECT_LE(max_output_near_origin(mid, 0.02), 0.02);
}

}  // namespace
}  // namespace qumem::hysteresis
