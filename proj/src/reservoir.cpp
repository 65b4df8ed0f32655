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

#include "qumem/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace qumem::reservoir {
namespace {

// Columns carrying less weight than this are dropped from a factor.
constexpr double kColumnFloor = 1e-28;

CVector haar_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = {re, im};
  }
  return v / v.norm();
}

CMatrix factor_of(const fock::QuantumState& rho) {
  if (rho.is_pure()) return rho.amplitudes();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.density());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 1e-14) keep.push_back(i);
  CMatrix k(rho.dim(), keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c)
    k.col(c) = es.eigenvectors().col(keep[c]) * std::sqrt(es.eigenvalues()(keep[c]));
  return k / k.norm();
}

}  // namespace

void ReservoirConfig::validate() const {
  if (modes < 3 || photons < 1) throw ConfigError("reservoir needs at least 3 modes and 1 photon");
  const int m = memristor_count();
  if (m < 0 || 3 * m > modes) throw ConfigError("memristor count needs 3 modes per device");
  if (shots < 0) throw ConfigError("shots must be 0 (exact) or positive");
  if (window < 1) throw ConfigError("memristor window must be at least one step");
}

fock::QuantumState EncodedInput::state(const fock::BasisPtr& basis) const {
  return fock::QuantumState::from_factor(basis, factor);
}

EncodedInput amplitude_encode(std::span<const double> v, const fock::OccupationBasis& basis) {
  if (v.size() > basis.size()) throw DimensionError("input vector longer than the basis");
  EncodedInput out;
  out.factor = CMatrix::Zero(basis.size(), 1);
  double norm2 = 0.0;
  for (double x : v) norm2 += x * x;
  if (norm2 == 0.0) {
    out.factor(0, 0) = 1.0;
    out.fallback = true;
    return out;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (std::size_t j = 0; j < v.size(); ++j) out.factor(j, 0) = v[j] * inv;
  return out;
}

CVector coherent_amplitudes(int k, int truncation) {
  if (k < 0 || truncation < 1) throw DomainError("invalid coherent-state parameters");
  CVector psi = CVector::Zero(truncation);
  if (k == 0) {
    psi(0) = 1.0;
    return psi;
  }
  // Work in logs; k^n / sqrt(n!) overflows long before n reaches the basis size.
  const double lk = std::log(static_cast<double>(k));
  for (int n = 0; n < truncation; ++n)
    psi(n) = std::exp(-0.5 * k * k + n * lk - 0.5 * std::lgamma(n + 1.0));
  return psi / psi.norm();
}

EncodedInput coherent_encode(std::span<const double> v, const fock::OccupationBasis& basis, int truncation) {
  if (truncation < 1 || static_cast<std::size_t>(truncation) > basis.size())
    throw DimensionError("truncation must lie in [1, basis size]");
  if (v.size() > static_cast<std::size_t>(truncation)) throw DimensionError("more weights than truncated levels");
  double total = 0.0;
  for (double x : v) {
    if (x < 0.0) throw DomainError("mixture weights must be non-negative");
    total += x;
  }
  if (total == 0.0) throw DomainError("all mixture weights are zero");
  std::vector<std::size_t> used;
  for (std::size_t j = 0; j < v.size(); ++j)
    if (v[j] > 0.0) used.push_back(j);
  EncodedInput out;
  out.encoding = Encoding::CoherentMixture;
  out.factor = CMatrix::Zero(basis.size(), used.size());
  for (std::size_t c = 0; c < used.size(); ++c) {
    const auto j = used[c];
    out.factor.col(c).head(truncation) = std::sqrt(v[j] / total) * coherent_amplitudes(static_cast<int>(j), truncation);
  }
  return out;
}

EncodedInput encode_state(const CVector& amplitudes) {
  if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-10) throw DomainError("state is not normalised");
  EncodedInput out;
  out.factor = amplitudes;
  return out;
}

fock::ModeUnitary mesh_from_couplers(int modes, std::span<const CouplerSpec> couplers) {
  if (modes < 2) throw DimensionError("mesh needs at least two modes");
  CMatrix u = CMatrix::Identity(modes, modes);
  for (const auto& c : couplers) {
    if (c.mode < 0 || c.mode + 1 >= modes) throw DimensionError("coupler outside the mesh");
    CMatrix local = fock::coupler(c.reflectivity);
    local.col(0) *= std::polar(1.0, c.phase);
    // Only rows mode, mode+1 change.
    const CMatrix rows = u.middleRows(c.mode, 2);
    u.middleRows(c.mode, 2) = local * rows;
  }
  return fock::ModeUnitary(std::move(u));
}

std::vector<CouplerSpec> random_mesh_layout(int modes, std::uint64_t seed) {
  if (modes < 2) throw DimensionError("mesh needs at least two modes");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<CouplerSpec> layout;
  for (int layer = 0; layer < modes; ++layer) {
    for (int j = layer % 2; j + 1 < modes; j += 2) {
      const double r = unit(rng);
      const double phase = 2.0 * kPi * unit(rng);
      layout.push_back({j, r, phase});
    }
  }
  return layout;
}

fock::ModeUnitary build_mesh(int modes, std::uint64_t seed) {
  const auto layout = random_mesh_layout(modes, seed);
  return mesh_from_couplers(modes, layout);
}

std::vector<double> ReservoirState::reflectivities() const {
  std::vector<double> r;
  r.reserve(memristors.size());
  for (const auto& m : memristors) r.push_back(m.reflectivity());
  return r;
}

Reservoir::Reservoir(const ReservoirConfig& config)
    : config_((config.validate(), config)),
      basis_(fock::make_basis(config.modes, config.photons)),
      u_in_(build_mesh(config.modes, config.mesh_seed)),
      u_out_(build_mesh(config.modes, config.mesh_seed + 0x9E3779B97F4A7C15ULL)),
      lifted_in_(fock::lift_unitary(u_in_, *basis_)),
      lifted_out_(fock::lift_unitary(u_out_, *basis_)) {
  const int count = config_.memristor_count();
  blocks_.resize(count);
  feedback_photons_.resize(count);
  for (int i = 0; i < count; ++i) {
    const int through = 3 * i + 1;
    const int fb = 3 * i + 2;
    std::map<std::size_t, Block> by_head;
    feedback_photons_[i].resize(basis_->size());
    for (std::size_t s = 0; s < basis_->size(); ++s) {
      fock::Occupation occ = basis_->occupation_of(s);
      const int n_fb = occ[fb];
      feedback_photons_[i][s] = n_fb;
      const int local = occ[through] + n_fb;
      occ[through] = local;
      occ[fb] = 0;
      auto& block = by_head[basis_->index_of(occ)];
      block.index.resize(local + 1);
      block.index[n_fb] = s;
    }
    for (auto& [head, block] : by_head) blocks_[i].push_back(std::move(block));
  }
}

ReservoirState Reservoir::initial_state() const {
  ReservoirState s;
  s.rng.seed(config_.shot_seed);
  for (int i = 0; i < config_.memristor_count(); ++i) {
    s.memristors.push_back(config_.feedback ? memristor::MemristorState::windowed(config_.window, 0.5, 0.0)
                                            : memristor::MemristorState::frozen(0.5));
  }
  return s;
}

void Reservoir::apply_mz(CMatrix& factor, int memristor, double reflectivity) const {
  std::vector<CMatrix> local(config_.photons + 1);
  for (int n = 0; n <= config_.photons; ++n)
    local[n] = fock::lift_unitary(fock::ModeUnitary(fock::coupler(reflectivity)), fock::OccupationBasis::fixed(2, n));
  CMatrix rows;
  for (const auto& block : blocks_[memristor]) {
    const auto size = static_cast<Eigen::Index>(block.index.size());
    if (size == 1) continue;  // vacuum on both rails
    rows.resize(size, factor.cols());
    for (Eigen::Index j = 0; j < size; ++j) rows.row(j) = factor.row(block.index[j]);
    rows = (local[size - 1] * rows).eval();
    for (Eigen::Index j = 0; j < size; ++j) factor.row(block.index[j]) = rows.row(j);
  }
}

LayerResult Reservoir::memristor_layer(const CMatrix& factor, std::span<const double> reflectivities) const {
  const int count = config_.memristor_count();
  if (static_cast<int>(reflectivities.size()) != count) throw DimensionError("one reflectivity per memristor expected");
  if (factor.rows() != static_cast<Eigen::Index>(dim())) throw DimensionError("factor does not match the basis");
  LayerResult out;
  CMatrix k = factor;
  for (int i = 0; i < count; ++i) {
    if (!(reflectivities[i] >= 0.0 && reflectivities[i] <= 1.0)) throw DomainError("reflectivity outside [0,1]");
    apply_mz(k, i, reflectivities[i]);
    // Branch on the feedback count n and move those n photons back to the through rail.
    std::vector<CMatrix> branches;
    double mean = 0.0;
    RVector dist = RVector::Zero(config_.photons + 1);
    Eigen::Index cols = 0;
    for (int n = 0; n <= config_.photons; ++n) {
      CMatrix b = CMatrix::Zero(k.rows(), k.cols());
      for (const auto& block : blocks_[i])
        if (static_cast<int>(block.index.size()) > n) b.row(block.index[0]) = k.row(block.index[n]);
      const double weight = b.squaredNorm();
      mean += n * weight;
      dist(n) = weight;
      if (weight <= kColumnFloor) continue;
      std::vector<Eigen::Index> live;
      for (Eigen::Index c = 0; c < b.cols(); ++c)
        if (b.col(c).squaredNorm() > kColumnFloor) live.push_back(c);
      CMatrix kept(b.rows(), live.size());
      for (std::size_t c = 0; c < live.size(); ++c) kept.col(c) = b.col(live[c]);
      cols += kept.cols();
      branches.push_back(std::move(kept));
    }
    out.feedback.push_back(mean);
    out.feedback_distribution.push_back(std::move(dist));
    k.resize(factor.rows(), cols);
    Eigen::Index at = 0;
    for (const auto& b : branches) {
      k.middleCols(at, b.cols()) = b;
      at += b.cols();
    }
  }
  out.factor = std::move(k);
  return out;
}

std::pair<fock::QuantumState, std::vector<double>> Reservoir::memristor_layer(
    const fock::QuantumState& rho, std::span<const double> reflectivities) const {
  if (!(rho.basis() == *basis_)) throw DimensionError("state does not live on the reservoir basis");
  auto layer = memristor_layer(factor_of(rho), reflectivities);
  return {fock::QuantumState::from_factor(basis_, layer.factor / layer.factor.norm()), std::move(layer.feedback)};
}

StepResult Reservoir::step(ReservoirState& state, const EncodedInput& x) const {
  if (x.factor.rows() != static_cast<Eigen::Index>(dim())) throw DimensionError("input does not match the basis");
  const auto refl = state.reflectivities();
  auto layer = memristor_layer(lifted_in_ * x.factor, refl);
  const CMatrix out = lifted_out_ * layer.factor;
  StepResult result;
  result.probs = out.rowwise().squaredNorm();
  result.probs /= result.probs.sum();
  result.feedback = layer.feedback;

  if (config_.shots > 0) {
    const auto counts = fock::sample_counts(result.probs, config_.shots, state.rng);
    for (Eigen::Index i = 0; i < result.probs.size(); ++i)
      result.probs(i) = static_cast<double>(counts[i]) / static_cast<double>(config_.shots);
    // Feedback means are estimated from the same number of detection events.
    for (std::size_t m = 0; m < layer.feedback.size(); ++m) {
      const RVector& dist = layer.feedback_distribution[m];
      const auto fb_counts = fock::sample_counts(dist / dist.sum(), config_.shots, state.rng);
      double mean = 0.0;
      for (std::size_t n = 0; n < fb_counts.size(); ++n) mean += static_cast<double>(n * fb_counts[n]);
      result.feedback[m] = mean / static_cast<double>(config_.shots);
    }
  }

  ++state.step_index;
  const double t = static_cast<double>(state.step_index);
  for (std::size_t i = 0; i < state.memristors.size(); ++i) {
    const double r_prev = std::max(refl[i], memristor::kRMin);
    state.memristors[i].advance(t, result.feedback[i] / r_prev);
  }
  return result;
}

RVector Reservoir::run_sequence(ReservoirState& state, std::span<const EncodedInput> inputs) const {
  if (inputs.empty()) throw DomainError("input sequence is empty");
  RVector probs;
  for (const auto& x : inputs) probs = step(state, x).probs;
  return probs;
}

RVector Reservoir::run_sequence(std::span<const EncodedInput> inputs) const {
  auto state = initial_state();
  return run_sequence(state, inputs);
}

CVector sample_entangled(int d_loc, std::size_t d, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(d_loc) * d_loc;
  if (d_loc < 2 || n > d) throw DimensionError("d_loc^2 must fit in the basis");
  std::mt19937_64 rng(seed);
  CVector out = CVector::Zero(d);
  out.head(n) = haar_vector(n, rng);
  return out;
}

CVector sample_separable(int d_loc, std::size_t d, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(d_loc) * d_loc;
  if (d_loc < 2 || n > d) throw DimensionError("d_loc^2 must fit in the basis");
  std::mt19937_64 rng(seed);
  const CVector a = haar_vector(d_loc, rng);
  const CVector b = haar_vector(d_loc, rng);
  CVector out = CVector::Zero(d);
  for (int i = 0; i < d_loc; ++i)
    for (int j = 0; j < d_loc; ++j) out(i * d_loc + j) = a(i) * b(j);
  return out;
}

double entanglement_entropy(const CVector& state, int d_loc) {
  const auto n = static_cast<Eigen::Index>(d_loc) * d_loc;
  if (d_loc < 1 || state.size() < n) throw DimensionError("state too short for d_loc");
  CMatrix m(d_loc, d_loc);
  for (int i = 0; i < d_loc; ++i)
    for (int j = 0; j < d_loc; ++j) m(i, j) = state(i * d_loc + j);
  Eigen::JacobiSVD<CMatrix> svd(m);
  const RVector s = svd.singularValues();
  const double total = s.squaredNorm();
  double h = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double p = s(i) * s(i) / total;
    if (p > 1e-300) h -= p * std::log(p);
  }
  return h;
}

}  // namespace qumem::reservoir
