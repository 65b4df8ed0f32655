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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "qumem/common.hpp"

namespace qumem::tomography {

// Analysis interferometer on rails A and B: a coupler of the given
// reflectivity after a phase shift on rail A.
struct TomographySetting {
  double reflectivity;
  double phase;
};

std::vector<TomographySetting> default_settings();
CMatrix analysis_unitary(const TomographySetting& s);

// Counts at rail A, rail B and the feedback port C. Doubles so that exact
// expected counts can be represented.
struct SettingCounts {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Detection probabilities (A, B, C) of a 3x3 state {vacuum, A, B}.
std::array<double, 3> detection_probabilities(const CMatrix& rho, const TomographySetting& s);

/// shots == 0 yields exact expected counts for a nominal 1e6 shots.
std::vector<SettingCounts> simulate_counts(const CMatrix& rho, std::span<const TomographySetting> settings,
                                           std::int64_t shots, std::uint64_t seed);

/// False when the settings cannot resolve the full 2x2 coherence block.
bool informationally_complete(std::span<const TomographySetting> settings);

double p00_estimate(std::span<const SettingCounts> counts);

struct ReconstructionReport {
  CMatrix rho;  // 3x3, PSD, unit trace
  double fidelity = 0.0;
  double purity = 0.0;
  double phi_global = 0.0;
  int iterations = 0;
  double log_likelihood = 0.0;  // per detected event, rails A and B only
  bool complete = true;  // settings resolve the whole coherence block
};

struct MleOptions {
  int max_iterations = 20000;
  double tolerance = 1e-9;  // relative likelihood change
};

ReconstructionReport mle_reconstruct(std::span<const SettingCounts> counts, std::span<const TomographySetting> settings,
                                     double p00, const MleOptions& options = {});

/// Sets report.fidelity against a reference density matrix.
void score(ReconstructionReport& report, const CMatrix& reference);

/// Transmitted-amplitude phase of a Mach-Zehnder set to reflectivity R = cos^2(theta/2).
double mz_transmitted_phase(double reflectivity);

struct CoherenceSample {
  double beta2;
  double reflectivity;
  cplx coherence;  // element (rail A, rail B)
};

/// Least-squares phase offset g for coherences |alpha||beta|sqrt(1-R) e^{-i(phi_MZ + g)}, in [0, 2pi).
double fit_global_phase(std::span<const CoherenceSample> samples);

struct Fixture {
  double beta2;
  double reflectivity;
  CMatrix rho_theory;
};

/// The 16 (|beta|^2, R) combinations with generated theory matrices.
std::vector<Fixture> table_fixtures(double phi_global = 5.6);

struct ReferenceFixture {
  int index;
  double beta2;
  double reflectivity;
  CMatrix rho_theory;
  CMatrix rho_experiment;
  double fidelity_percent;
  double purity_theory;
  double purity_experiment;
};

struct ReferenceTable {
  double phi_global;
  std::vector<ReferenceFixture> fixtures;
};

ReferenceTable load_reference_table(const std::filesystem::path& path);

/// Nearest PSD unit-trace matrix (eigenvalue clipping).
CMatrix project_to_density(const CMatrix& a);

}  // namespace qumem::tomography
