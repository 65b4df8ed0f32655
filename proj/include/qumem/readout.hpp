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

#include "qumem/common.hpp"

namespace qumem::readout {

// Two stacked linear maps followed by softmax. There are no biases and no
// hidden nonlinearity, so the pre-softmax output is linear in the input.
class ReadoutModel {
 public:
  ReadoutModel(int inputs, int hidden, int outputs);
  static ReadoutModel random(int inputs, int hidden, int outputs, std::uint64_t seed);

  int inputs() const { return static_cast<int>(w1_.rows()); }
  int hidden() const { return static_cast<int>(w1_.cols()); }
  int outputs() const { return static_cast<int>(w2_.cols()); }
  std::size_t parameter_count() const { return w1_.size() + w2_.size(); }

  RMatrix& w1() { return w1_; }
  RMatrix& w2() { return w2_; }
  const RMatrix& w1() const { return w1_; }
  const RMatrix& w2() const { return w2_; }

  /// Fixed factor applied to every input before the first layer.
  double input_scale() const { return input_scale_; }
  void set_input_scale(double s) { input_scale_ = s; }

  RVector logits(const RVector& x) const;
  RVector forward(const RVector& x) const;
  int predict(const RVector& x) const;

 private:
  RMatrix w1_;
  RMatrix w2_;
  double input_scale_ = 1.0;
};

RVector softmax(const RVector& z);

struct LabeledExample {
  RVector probs;
  int label;
};

struct Gradient {
  double loss = 0.0;  // mean cross-entropy
  RMatrix w1;
  RMatrix w2;
};

Gradient loss_and_gradient(const ReadoutModel& model, std::span<const LabeledExample> batch);
double mean_loss(const ReadoutModel& model, std::span<const LabeledExample> data);
double accuracy(const ReadoutModel& model, std::span<const LabeledExample> data);

struct TrainConfig {
  int epochs = 15;
  double lr = 0.05;
  int batch = 32;
  std::uint64_t seed = 0;
};

struct TrainResult {
  ReadoutModel model;
  std::vector<double> epoch_loss;  // training loss after each epoch
  double train_accuracy = 0.0;
};

TrainResult train(ReadoutModel model, std::span<const LabeledExample> data, const TrainConfig& config);

}  // namespace qumem::readout
