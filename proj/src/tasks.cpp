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

#include "qumem/tasks.hpp"

#include <random>

namespace qumem::tasks {

TaskResult fit_readout(std::span<const readout::LabeledExample> train, std::span<const readout::LabeledExample> test,
                       int classes, const ReadoutConfig& config) {
  if (train.empty() || test.empty()) throw DomainError("empty dataset");
  const int width = static_cast<int>(train.front().probs.size());
  auto model = readout::ReadoutModel::random(width, config.hidden, classes, config.init_seed);
  // Reservoir outputs sum to one; scaling by the width keeps typical inputs O(1).
  model.set_input_scale(static_cast<double>(width));
  auto trained = readout::train(std::move(model), train, config.train);
  TaskResult r{trained.model, trained.epoch_loss, trained.train_accuracy, 0.0, 0};
  r.test_accuracy = readout::accuracy(r.model, test);
  return r;
}

std::vector<reservoir::EncodedInput> encode_image(const RMatrix& image, reservoir::Encoding encoding,
                                                  const fock::OccupationBasis& basis, std::size_t* fallbacks) {
  std::vector<reservoir::EncodedInput> seq;
  for (const auto& col : mnist::columns_as_sequence(image, static_cast<int>(image.rows()), static_cast<int>(image.cols()))) {
    const std::span<const double> v(col.data(), static_cast<std::size_t>(col.size()));
    if (encoding == reservoir::Encoding::Quantum || col.sum() == 0.0) {
      auto x = reservoir::amplitude_encode(v, basis);
      x.encoding = encoding;
      if (x.fallback && fallbacks) ++*fallbacks;
      seq.push_back(std::move(x));
    } else {
      seq.push_back(reservoir::coherent_encode(v, basis, static_cast<int>(basis.size())));
    }
  }
  return seq;
}

std::vector<readout::LabeledExample> mnist_features(const reservoir::Reservoir& res, std::span<const mnist::Image> images,
                                                    reservoir::Encoding encoding, std::size_t* fallbacks) {
  std::vector<readout::LabeledExample> out;
  out.reserve(images.size());
  for (const auto& img : images) {
    const auto seq = encode_image(img.pixels, encoding, *res.basis(), fallbacks);
    out.push_back({res.run_sequence(seq), img.label});
  }
  return out;
}

TaskResult run_mnist_task(const mnist::MnistSubset& data, const MnistTaskConfig& config) {
  const reservoir::Reservoir res(config.reservoir);
  std::size_t fallbacks = 0;
  const auto train = mnist_features(res, data.train, config.encoding, &fallbacks);
  const auto test = mnist_features(res, data.test, config.encoding, &fallbacks);
  auto r = fit_readout(train, test, static_cast<int>(data.digits.size()), config.readout);
  r.fallback_inputs = fallbacks;
  return r;
}

std::vector<LabeledState> build_entanglement_dataset(int n_per_class, int d_loc, std::size_t d, std::uint64_t seed) {
  if (n_per_class < 1) throw DomainError("need at least one state per class");
  std::mt19937_64 rng(seed);
  std::vector<LabeledState> out;
  out.reserve(2 * n_per_class);
  for (int i = 0; i < n_per_class; ++i) {
    out.push_back({reservoir::sample_entangled(d_loc, d, rng()), 1});
    out.push_back({reservoir::sample_separable(d_loc, d, rng()), 0});
  }
  return out;
}

std::vector<readout::LabeledExample> entanglement_features(const reservoir::Reservoir& res,
                                                           std::span<const LabeledState> states, int copies) {
  if (copies < 1) throw DomainError("need at least one copy per state");
  std::vector<readout::LabeledExample> out;
  out.reserve(states.size());
  for (const auto& s : states) {
    const std::vector<reservoir::EncodedInput> seq(copies, reservoir::encode_state(s.amplitudes));
    out.push_back({res.run_sequence(seq), s.label});
  }
  return out;
}

TaskResult run_entanglement_task(const EntanglementTaskConfig& config) {
  const reservoir::Reservoir res(config.reservoir);
  const auto train_states = build_entanglement_dataset(config.n_train_per_class, config.d_loc, res.dim(), config.data_seed);
  const auto test_states =
      build_entanglement_dataset(config.n_test_per_class, config.d_loc, res.dim(), config.data_seed + 1);
  const auto train = entanglement_features(res, train_states, config.copies);
  const auto test = entanglement_features(res, test_states, config.copies);
  return fit_readout(train, test, 2, config.readout);
}

}  // namespace qumem::tasks
