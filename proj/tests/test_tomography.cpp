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
#include "qumem/fock.hpp"
#include "qumem/memristor.hpp"
#include "qumem/tomography.hpp"

#ifndef QUMEM_RESOURCE_DIR
#error "QUMEM_RESOURCE_DIR must be defined"
#endif

namespace qumem::tomography {
namespace {

const ReferenceTable& reference() {
  static const ReferenceTable t = load_reference_table(std::string(QUMEM_RESOURCE_DIR) + "/tomography_fixtures.json");
  return t;
}

// Largest deviation over real and imaginary parts, the quantities the table rounds.
double componentwise_gap(const CMatrix& a, const CMatrix& b) {
  const CMatrix d = a - b;
  return std::max(d.real().cwiseAbs().maxCoeff(), d.imag().cwiseAbs().maxCoeff());
}

ReconstructionReport round_trip(const CMatrix& rho, std::int64_t shots, std::uint64_t seed) {
  const auto settings = default_settings();
  const auto counts = simulate_counts(rho, settings, shots, seed);
  auto rep = mle_reconstruct(counts, settings, p00_estimate(counts));
  score(rep, rho);
  return rep;
}

TEST(Fixtures, MatchReferenceTable) {
  const auto gen = table_fixtures(reference().phi_global);
  ASSERT_EQ(gen.size(), 16u);
  ASSERT_EQ(reference().fixtures.size(), 16u);
  for (std::size_t i = 0; i < gen.size(); ++i) {
    const auto& ref = reference().fixtures[i];
    EXPECT_EQ(gen[i].beta2, ref.beta2);
    EXPECT_EQ(gen[i].reflectivity, ref.reflectivity);
    EXPECT_LE(componentwise_gap(gen[i].rho_theory, ref.rho_theory), 0.005) << "fixture " << ref.index;
    // Two-decimal rounding of an exact half (0.745) lands on either side.
    EXPECT_NEAR(oracle::trace_square(gen[i].rho_theory), ref.purity_theory, 0.005 + 1e-12) << "fixture " << ref.index;
  }
}

TEST(Fixtures, NamedRows) {
  const auto gen = table_fixtures();
  EXPECT_NEAR(gen[4].rho_theory(0, 0).real(), 0.21, 1e-12);
  EXPECT_NEAR(gen[4].rho_theory(1, 1).real(), 0.70, 1e-12);
  EXPECT_NEAR(gen[4].rho_theory(2, 2).real(), 0.09, 1e-12);
  EXPECT_NEAR(fock::purity(gen[13].rho_theory), 0.5, 1e-12);
  EXPECT_NEAR(gen[15].rho_theory(0, 0).real(), 1.0, 1e-12);
  EXPECT_NEAR(fock::purity(gen[15].rho_theory), 1.0, 1e-12);
}

TEST(Counts, ExactAndIdentitySetting) {
  CMatrix rail_a = CMatrix::Zero(3, 3);
  rail_a(1, 1) = 1.0;
  const std::vector<TomographySetting> id{{0.0, 0.0}};
  const auto c = simulate_counts(rail_a, id, 1000, 3);
  EXPECT_EQ(c[0].a, 1000.0);
  EXPECT_EQ(c[0].b + c[0].c, 0.0);
  const auto fx = table_fixtures()[6].rho_theory;
  const auto exact = simulate_counts(fx, default_settings(), 0, 0);
  for (std::size_t s = 0; s < exact.size(); ++s) {
    const auto p = detection_probabilities(fx, default_settings()[s]);
    EXPECT_NEAR(exact[s].a / 1e6, p[0], 1e-12);
    EXPECT_NEAR(exact[s].c / 1e6, p[2], 1e-12);
  }
  const auto a = simulate_counts(fx, default_settings(), 500, 9), b = simulate_counts(fx, default_settings(), 500, 9);
  for (std::size_t s = 0; s < a.size(); ++s) EXPECT_EQ(a[s].a, b[s].a);
}

TEST(Counts, CompletenessFlag) {
  EXPECT_TRUE(informationally_complete(default_settings()));
  const std::vector<TomographySetting> partial{{0.0, 0.0}, {0.5, 0.0}};
  EXPECT_FALSE(informationally_complete(partial));
}

TEST(Mle, ExactRoundTripAllFixtures) {
  for (const auto& f : table_fixtures()) {
    const auto rep = round_trip(f.rho_theory, 0, 0);
    EXPECT_GE(rep.fidelity, 0.999) << f.beta2 << "," << f.reflectivity;
    EXPECT_NO_THROW(fock::validate_density(rep.rho, 1e-9));
  }
  const auto row5 = round_trip(table_fixtures()[4].rho_theory, 0, 0);
  EXPECT_NEAR(row5.purity, 0.67, 0.02);
}

TEST(Mle, SampledFixturesMeanFidelity) {
  double total = 0.0;
  const auto fx = table_fixtures();
  for (std::size_t i = 0; i < fx.size(); ++i) total += round_trip(fx[i].rho_theory, 1000000, 40 + i).fidelity;
  EXPECT_GE(total / fx.size(), 0.995);
}

TEST(Mle, FidelityImprovesWithShots) {
  const auto rho = table_fixtures()[7].rho_theory;
  double prev = 0.0;
  for (std::int64_t shots : {100, 1000, 10000, 100000}) {
    double mean = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) mean += round_trip(rho, shots, 1000 + s).fidelity / 20.0;
    EXPECT_GE(mean, prev - 1e-4) << shots;
    prev = mean;
  }
}

TEST(Mle, PhysicalUnderNoiseAndErrors) {
  const auto settings = default_settings();
  std::vector<SettingCounts> noisy{{10, 0, 1}, {0, 12, 0}, {3, 9, 2}, {8, 1, 0}};
  const auto rep = mle_reconstruct(noisy, settings, p00_estimate(noisy));
  EXPECT_NO_THROW(fock::validate_density(rep.rho, 1e-9));
  std::vector<SettingCounts> zero(4);
  EXPECT_THROW(mle_reconstruct(zero, settings, 0.0), DomainError);
  EXPECT_THROW(p00_estimate(zero), DomainError);
  // Only feedback clicks: the coherence block carries no weight.
  std::vector<SettingCounts> dark{{0, 0, 5}, {0, 0, 5}, {0, 0, 5}, {0, 0, 5}};
  EXPECT_NEAR(mle_reconstruct(dark, settings, p00_estimate(dark)).rho(0, 0).real(), 1.0, 1e-15);
}

TEST(Phase, MachZehnderPhase) {
  for (double r : {0.0, 0.3, 0.5, 0.7, 1.0}) {
    const double theta = 2.0 * (mz_transmitted_phase(r) - kPi / 2);
    EXPECT_NEAR(std::pow(std::cos(theta / 2), 2), r, 1e-12);
  }
}

TEST(Phase, GlobalPhaseRoundTrip) {
  for (double g : {5.6, 0.0, 2.0}) {
    std::vector<CoherenceSample> samples;
    for (const auto& f : table_fixtures(g)) samples.push_back({f.beta2, f.reflectivity, f.rho_theory(1, 2)});
    const double got = fit_global_phase(samples);
    const double err = std::remainder(got - g, 2 * kPi);
    EXPECT_NEAR(err, 0.0, 0.01) << g;
  }
  std::vector<CoherenceSample> rounded;
  for (const auto& f : reference().fixtures) rounded.push_back({f.beta2, f.reflectivity, f.rho_theory(1, 2)});
  EXPECT_NEAR(fit_global_phase(rounded), 5.6, 0.01);
  const std::vector<CoherenceSample> flat{{0.3, 1.0, 0.0}, {0.7, 1.0, 0.0}};
  EXPECT_THROW(fit_global_phase(flat), DomainError);
}

}  // namespace
}  // namespace qumem::tomography
