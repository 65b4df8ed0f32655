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

#include "qumem/readout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace qumem::readout {

ReadoutModel::ReadoutModel(int inputs, int hidden, int outputs)
    : w1_(RMatrix::Zero(inputs, hidden)), w2_(RMatrix::Zero(hidden, outputs)) {
  if (inputs < 1 || hidden < 1 || outputs < 2) throw DimensionError("invalid readout shape");
}

ReadoutModel ReadoutModel::random(int inputs, int hidden, int outputs, std::uint64_t seed) {
  ReadoutModel m(inputs, hidden, outputs);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g1(0.0, 1.0 / std::sqrt(static_cast<double>(inputs)));
  std::normal_distribution<double> g2(0.0, 1.0 / std::sqrt(static_cast<double>(hidden)));
  for (Eigen::Index i = 0; i < m.w1_.size(); ++i) m.w1_.data()[i] = g1(rng);
  for (Eigen::Index i = 0; i < m.w2_.size(); ++i) m.w2_.data()[i] = g2(rng);
  return m;
}

RVector ReadoutModel::logits(const RVector& x) const {
  if (x.size() != w1_.rows()) throw DimensionError("input length differs from readout width");
  return w2_.transpose() * (w1_.transpose() * (input_scale_ * x));
}

RVector ReadoutModel::forward(const RVector& x) const { return softmax(logits(x)); }

int ReadoutModel::predict(const RVector& x) const {
  Eigen::Index best = 0;
  logits(x).maxCoeff(&best);
  return static_cast<int>(best);
}

RVector softmax(const RVector& z) {
  const RVector e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

Gradient loss_and_gradient(const ReadoutModel& model, std::span<const LabeledExample> batch) {
  if (batch.empty()) throw DomainError("empty batch");
  Gradient g;
  g.w1 = RMatrix::Zero(model.w1().rows(), model.w1().cols());
  g.w2 = RMatrix::Zero(model.w2().rows(), model.w2().cols());
  for (const auto& ex : batch) {
    if (ex.label < 0 || ex.label >= model.outputs()) throw DomainError("label out of range");
    const RVector x = model.input_scale() * ex.probs;
    const RVector h = model.w1().transpose() * x;
    const RVector z = model.w2().transpose() * h;
    const double zmax = z.maxCoeff();
    const double lse = zmax + std::log((z.array() - zmax).exp().sum());
    g.loss += lse - z(ex.label);
    RVector delta = (z.array() - lse).exp();
    delta(ex.label) -= 1.0;
    g.w2.noalias() += h * delta.transpose();
    const RVector dh = model.w2() * delta;
    g.w1.noalias() += x * dh.transpose();
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  g.loss *= inv;
  g.w1 *= inv;
  g.w2 *= inv;
  return g;
}

double mean_loss(const ReadoutModel& model, std::span<const LabeledExample> data) {
  return loss_and_gradient(model, data).loss;
}

double accuracy(const ReadoutModel& model, std::span<const LabeledExample> data) {
  if (data.empty()) throw DomainError("empty dataset");
  std::size_t hits = 0;
  for (const auto& ex : data) hits += model.predict(ex.probs) == ex.label;
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

TrainResult train(ReadoutModel model, std::span<const LabeledExample> data, const TrainConfig& config) {
  if (data.empty()) throw DomainError("empty training set");
  if (config.batch < 1 || config.epochs < 0) throw ConfigError("invalid training configuration");
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<LabeledExample> batch;
  TrainResult result{model, {}, 0.0};
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch) {
      const std::size_t end = std::min(order.size(), start + config.batch);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(data[order[i]]);
      const Gradient g = loss_and_gradient(model, batch);
      model.w1() -= config.lr * g.w1;
      model.w2() -= config.lr * g.w2;
    }
    result.epoch_loss.push_back(mean_loss(model, data));
  }
  result.model = model;
  result.train_accuracy = accuracy(model, data);
  return result;
}

}  // namespace qumem::readout
