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
#include <span>
#include <vector>

#include "qumem/mnist.hpp"
#include "qumem/readout.hpp"
#include "qumem/reservoir.hpp"

namespace qumem::tasks {

struct TaskResult {
  readout::ReadoutModel model;
  std::vector<double> epoch_loss;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::size_t fallback_inputs = 0;  // zero vectors replaced by the vacuum state
};

struct ReadoutConfig {
  int hidden = 10;
  std::uint64_t init_seed = 7;
  readout::TrainConfig train;
};

/// Trains on `train` and scores on `test`. The readout input is scaled by its width.
TaskResult fit_readout(std::span<const readout::LabeledExample> train, std::span<const readout::LabeledExample> test,
                       int classes, const ReadoutConfig& config);

std::vector<reservoir::EncodedInput> encode_image(const RMatrix& image, reservoir::Encoding encoding,
                                                  const fock::OccupationBasis& basis, std::size_t* fallbacks = nullptr);

/// Reservoir output after each image's column sequence, with a fresh reservoir state per image.
std::vector<readout::LabeledExample> mnist_features(const reservoir::Reservoir& res, std::span<const mnist::Image> images,
                                                    reservoir::Encoding encoding, std::size_t* fallbacks = nullptr);

struct MnistTaskConfig {
  reservoir::ReservoirConfig reservoir;
  reservoir::Encoding encoding = reservoir::Encoding::Quantum;
  ReadoutConfig readout;
};

TaskResult run_mnist_task(const mnist::MnistSubset& data, const MnistTaskConfig& config);

struct LabeledState {
  CVector amplitudes;
  int label;  // 1 entangled, 0 separable
};

std::vector<LabeledState> build_entanglement_dataset(int n_per_class, int d_loc, std::size_t d, std::uint64_t seed);

/// Each state is fed `copies` times in a row; the final output is the feature vector.
std::vector<readout::LabeledExample> entanglement_features(const reservoir::Reservoir& res,
                                                           std::span<const LabeledState> states, int copies);

struct EntanglementTaskConfig {
  reservoir::ReservoirConfig reservoir;
  int n_train_per_class = 500;
  int n_test_per_class = 500;
  int d_loc = 12;
  int copies = 100;
  std::uint64_t data_seed = 11;
  ReadoutConfig readout;

  EntanglementTaskConfig() { reservoir.window = 100; }
};

TaskResult run_entanglement_task(const EntanglementTaskConfig& config);

}  // namespace qumem::tasks
