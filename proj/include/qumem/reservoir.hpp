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

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "qumem/fock.hpp"
#include "qumem/memristor.hpp"

namespace qumem::reservoir {

struct ReservoirConfig {
  int modes = 9;
  int photons = 3;
  int n_memristors = -1;  // -1 selects modes / 3
  std::uint64_t mesh_seed = 1;
  std::int64_t shots = 0;  // 0 means exact probabilities
  std::uint64_t shot_seed = 0;
  int window = 12;  // memristor integration window in steps
  bool feedback = true;

  int memristor_count() const { return n_memristors < 0 ? modes / 3 : n_memristors; }
  void validate() const;
};

enum class Encoding { Quantum, CoherentMixture };

struct EncodedInput {
  // Density operator K K^dag over the reservoir basis.
  CMatrix factor;
  Encoding encoding = Encoding::Quantum;
  bool fallback = false;  // set when a zero vector was replaced by basis state 0

  fock::QuantumState state(const fock::BasisPtr& basis) const;
};

EncodedInput amplitude_encode(std::span<const double> v, const fock::OccupationBasis& basis);
/// Mixture sum_j v_j |psi_j><psi_j| of truncated coherent states of amplitude j,
/// each normalised on the first `truncation` basis states.
EncodedInput coherent_encode(std::span<const double> v, const fock::OccupationBasis& basis, int truncation);
EncodedInput encode_state(const CVector& amplitudes);

/// Truncated coherent amplitudes e^{-k^2/2} k^n / sqrt(n!) for n < truncation, normalised.
CVector coherent_amplitudes(int k, int truncation);

struct CouplerSpec {
  int mode;  // couples mode and mode + 1
  double reflectivity;
  double phase;
};

fock::ModeUnitary mesh_from_couplers(int modes, std::span<const CouplerSpec> couplers);
std::vector<CouplerSpec> random_mesh_layout(int modes, std::uint64_t seed);
fock::ModeUnitary build_mesh(int modes, std::uint64_t seed);

struct ReservoirState {
  std::vector<memristor::MemristorState> memristors;
  std::mt19937_64 rng;
  std::int64_t step_index = 0;

  std::vector<double> reflectivities() const;
};

struct LayerResult {
  CMatrix factor;
  std::vector<double> feedback;  // mean feedback photon number per memristor
  std::vector<RVector> feedback_distribution;  // P(n feedback photons) per memristor
};

struct StepResult {
  RVector probs;
  std::vector<double> feedback;
};

// Fixed optics of the reservoir. Mutable dynamics live in ReservoirState.
class Reservoir {
 public:
  explicit Reservoir(const ReservoirConfig& config);

  const ReservoirConfig& config() const { return config_; }
  const fock::BasisPtr& basis() const { return basis_; }
  std::size_t dim() const { return basis_->size(); }
  const fock::ModeUnitary& input_mesh() const { return u_in_; }
  const fock::ModeUnitary& output_mesh() const { return u_out_; }

  ReservoirState initial_state() const;

  /// Memristor i uses modes (3i bypass, 3i+1 through, 3i+2 feedback). Each
  /// memristor splits its through rail with reflectivity R onto the feedback
  /// rail, counts the feedback photons and puts them back on the through rail.
  LayerResult memristor_layer(const CMatrix& factor, std::span<const double> reflectivities) const;
  std::pair<fock::QuantumState, std::vector<double>> memristor_layer(const fock::QuantumState& rho,
                                                                     std::span<const double> reflectivities) const;

  StepResult step(ReservoirState& state, const EncodedInput& x) const;
  RVector run_sequence(ReservoirState& state, std::span<const EncodedInput> inputs) const;
  /// Runs from a fresh initial state.
  RVector run_sequence(std::span<const EncodedInput> inputs) const;

 private:
  struct Block {
    // Indices of the states sharing all other occupations, ordered by the
    // number of photons on the feedback rail.
    std::vector<std::size_t> index;
  };

  void apply_mz(CMatrix& factor, int memristor, double reflectivity) const;

  ReservoirConfig config_;
  fock::BasisPtr basis_;
  fock::ModeUnitary u_in_;
  fock::ModeUnitary u_out_;
  CMatrix lifted_in_;
  CMatrix lifted_out_;
  std::vector<std::vector<Block>> blocks_;  // per memristor
  std::vector<std::vector<int>> feedback_photons_;  // per memristor, per basis index
};

CVector sample_entangled(int d_loc, std::size_t d, std::uint64_t seed);
CVector sample_separable(int d_loc, std::size_t d, std::uint64_t seed);
/// Von Neumann entropy (nats) of one factor of a state on the first d_loc^2 basis states.
double entanglement_entropy(const CVector& state, int d_loc);

}  // namespace qumem::reservoir
