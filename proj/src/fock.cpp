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

#include "qumem/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace qumem::fock {
namespace {

void enumerate_into(int modes, int photons, Occupation& prefix, std::vector<Occupation>& out) {
  const int mode = static_cast<int>(prefix.size());
  if (mode == modes - 1) {
    prefix.push_back(photons);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int n = photons; n >= 0; --n) {
    prefix.push_back(n);
    enumerate_into(modes, photons - n, prefix, out);
    prefix.pop_back();
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// Modes with nonzero occupation and their multiplicities.
struct Support {
  std::vector<int> modes;
  std::vector<int> mult;
  double norm = 1.0;  // sqrt(prod n!)
};

Support support_of(std::span<const int> occ) {
  Support s;
  double f = 1.0;
  for (int m = 0; m < static_cast<int>(occ.size()); ++m) {
    if (occ[m] > 0) {
      s.modes.push_back(m);
      s.mult.push_back(occ[m]);
      f *= factorial(occ[m]);
    }
  }
  s.norm = std::sqrt(f);
  return s;
}

cplx lifted_amplitude(const CMatrix& u, const Support& out, const Support& in) {
  if (out.modes.empty() && in.modes.empty()) return {1.0, 0.0};
  CMatrix sub(out.modes.size(), in.modes.size());
  for (std::size_t i = 0; i < out.modes.size(); ++i)
    for (std::size_t j = 0; j < in.modes.size(); ++j) sub(i, j) = u(out.modes[i], in.modes[j]);
  return permanent_repeated(sub, out.mult, in.mult) / (out.norm * in.norm);
}

void require_same_basis(const QuantumState& a, const QuantumState& b) {
  if (!(a.basis() == b.basis())) throw DimensionError("states live on different bases");
}

}  // namespace

OccupationBasis::OccupationBasis(int modes, int min_photons, int max_photons)
    : modes_(modes), min_photons_(min_photons), max_photons_(max_photons) {
  if (modes < 1) throw DimensionError("occupation basis needs at least one mode");
  if (min_photons < 0 || max_photons < min_photons)
    throw DimensionError("invalid photon-number range");
  Occupation prefix;
  for (int p = max_photons; p >= min_photons; --p) enumerate_into(modes, p, prefix, states_);
  if (min_photons != max_photons) std::sort(states_.begin(), states_.end(), std::greater<>());
  for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
}

const Occupation& OccupationBasis::occupation_of(std::size_t index) const {
  if (index >= states_.size()) throw DimensionError("basis index out of range");
  return states_[index];
}

int OccupationBasis::photons_of(std::size_t index) const {
  const auto& occ = occupation_of(index);
  return std::accumulate(occ.begin(), occ.end(), 0);
}

std::optional<std::size_t> OccupationBasis::find(std::span<const int> occ) const {
  if (static_cast<int>(occ.size()) != modes_) return std::nullopt;
  auto it = index_.find(Occupation(occ.begin(), occ.end()));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t OccupationBasis::index_of(std::span<const int> occ) const {
  if (auto idx = find(occ)) return *idx;
  throw DimensionError("occupation is not part of this basis");
}

OccupationBasis enumerate_basis(int modes, int photons) {
  return OccupationBasis::fixed(modes, photons);
}

BasisPtr make_basis(int modes, int photons) {
  return std::make_shared<const OccupationBasis>(enumerate_basis(modes, photons));
}

ModeUnitary::ModeUnitary(CMatrix u, double tolerance) : u_(std::move(u)) {
  if (u_.rows() != u_.cols() || u_.rows() == 0) throw DimensionError("mode unitary must be square");
  const double err = (u_.adjoint() * u_ - CMatrix::Identity(u_.rows(), u_.cols())).cwiseAbs().maxCoeff();
  if (err > tolerance) throw DomainError("matrix is not unitary (deviation " + std::to_string(err) + ")");
}

ModeUnitary ModeUnitary::identity(int modes) {
  return ModeUnitary(CMatrix::Identity(modes, modes));
}

ModeUnitary ModeUnitary::adjoint() const { return ModeUnitary(u_.adjoint()); }

ModeUnitary ModeUnitary::operator*(const ModeUnitary& rhs) const {
  if (dimension() != rhs.dimension()) throw DimensionError("mode unitary dimensions differ");
  return ModeUnitary(u_ * rhs.u_);
}

CMatrix balanced_coupler() {
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix b(2, 2);
  b << cplx(s, 0), cplx(0, s), cplx(0, s), cplx(s, 0);
  return b;
}

CMatrix coupler(double reflectivity) {
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0)) throw DomainError("reflectivity outside [0,1]");
  const double t = std::sqrt(1.0 - reflectivity);
  const double r = std::sqrt(reflectivity);
  CMatrix b(2, 2);
  b << cplx(t, 0), cplx(0, r), cplx(0, r), cplx(t, 0);
  return b;
}

ModeUnitary embed(const CMatrix& local, std::span<const int> modes, int total_modes) {
  if (local.rows() != static_cast<Eigen::Index>(modes.size()) || local.cols() != local.rows())
    throw DimensionError("local unitary does not match the mode list");
  CMatrix u = CMatrix::Identity(total_modes, total_modes);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i] < 0 || modes[i] >= total_modes) throw DimensionError("mode index out of range");
    for (std::size_t j = 0; j < modes.size(); ++j) u(modes[i], modes[j]) = local(i, j);
  }
  return ModeUnitary(std::move(u));
}

cplx permanent(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("permanent needs a square matrix");
  const int n = static_cast<int>(a.rows());
  if (n == 0) return {1.0, 0.0};
  // Gray-code walk over column subsets; row_sums holds sum_{j in S} a(i,j).
  CVector row_sums = CVector::Zero(n);
  cplx total = 0.0;
  std::uint64_t gray = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const int bit = std::countr_zero(k);
    const std::uint64_t next = gray ^ (std::uint64_t{1} << bit);
    if (next & (std::uint64_t{1} << bit))
      row_sums += a.col(bit);
    else
      row_sums -= a.col(bit);
    gray = next;
    cplx prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= row_sums(i);
    const int size = std::popcount(gray);
    total += ((n - size) % 2 == 0) ? prod : -prod;
  }
  return total;
}

cplx permanent_repeated(const CMatrix& u, std::span<const int> row_mult, std::span<const int> col_mult) {
  if (u.rows() != static_cast<Eigen::Index>(row_mult.size()) ||
      u.cols() != static_cast<Eigen::Index>(col_mult.size()))
    throw DimensionError("multiplicities do not match matrix shape");
  const int n = std::accumulate(row_mult.begin(), row_mult.end(), 0);
  if (n != std::accumulate(col_mult.begin(), col_mult.end(), 0))
    throw DimensionError("row and column multiplicities must have equal totals");
  if (n == 0) return {1.0, 0.0};

  const auto cols = col_mult.size();
  std::vector<int> k(cols, 0);
  cplx total = 0.0;
  CVector row_sums(u.rows());
  // Odometer over k_j in [0, c_j].
  while (true) {
    int ksum = 0;
    double weight = 1.0;
    for (std::size_t j = 0; j < cols; ++j) {
      ksum += k[j];
      weight *= binomial(col_mult[j], k[j]);
    }
    if (ksum > 0) {
      row_sums.setZero();
      for (std::size_t j = 0; j < cols; ++j)
        if (k[j] != 0) row_sums += static_cast<double>(k[j]) * u.col(j);
      cplx prod = 1.0;
      for (Eigen::Index i = 0; i < u.rows(); ++i)
        for (int r = 0; r < row_mult[i]; ++r) prod *= row_sums(i);
      total += (((n - ksum) % 2 == 0) ? weight : -weight) * prod;
    }
    std::size_t j = 0;
    while (j < cols && k[j] == col_mult[j]) k[j++] = 0;
    if (j == cols) break;
    ++k[j];
  }
  return total;
}

CMatrix lift_unitary(const ModeUnitary& u, const OccupationBasis& basis) {
  if (u.dimension() != basis.modes()) throw DimensionError("unitary dimension differs from mode count");
  const auto d = static_cast<Eigen::Index>(basis.size());
  std::vector<Support> supports;
  std::vector<int> photons;
  supports.reserve(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    supports.push_back(support_of(basis.occupation_of(i)));
    photons.push_back(basis.photons_of(i));
  }
  CMatrix lifted = CMatrix::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      if (photons[a] == photons[b]) lifted(a, b) = lifted_amplitude(u.matrix(), supports[a], supports[b]);
  return lifted;
}

CMatrix lift_local(const CMatrix& local, std::span<const int> modes, const OccupationBasis& basis) {
  const int k = static_cast<int>(modes.size());
  if (local.rows() != k || local.cols() != k) throw DimensionError("local unitary does not match the mode list");
  std::vector<bool> touched(basis.modes(), false);
  for (int m : modes) {
    if (m < 0 || m >= basis.modes() || touched[m]) throw DimensionError("invalid mode list");
    touched[m] = true;
  }
  // Group states by their occupation outside `modes`.
  std::map<Occupation, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& occ = basis.occupation_of(i);
    Occupation rest;
    for (int m = 0; m < basis.modes(); ++m)
      if (!touched[m]) rest.push_back(occ[m]);
    groups[rest].push_back(i);
  }
  const auto d = static_cast<Eigen::Index>(basis.size());
  CMatrix lifted = CMatrix::Zero(d, d);
  for (const auto& [rest, members] : groups) {
    std::vector<Support> local_support;
    std::vector<int> local_photons;
    for (auto i : members) {
      const auto& occ = basis.occupation_of(i);
      Occupation loc(k);
      for (int j = 0; j < k; ++j) loc[j] = occ[modes[j]];
      local_support.push_back(support_of(loc));
      local_photons.push_back(std::accumulate(loc.begin(), loc.end(), 0));
    }
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = 0; b < members.size(); ++b)
        if (local_photons[a] == local_photons[b])
          lifted(members[a], members[b]) = lifted_amplitude(local, local_support[a], local_support[b]);
  }
  return lifted;
}

QuantumState QuantumState::pure(BasisPtr basis, CVector amplitudes) {
  if (!basis) throw DimensionError("null basis");
  if (amplitudes.size() != static_cast<Eigen::Index>(basis->size()))
    throw DimensionError("amplitude vector length differs from basis size");
  if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-10) throw DomainError("state is not normalised");
  return QuantumState(std::move(basis), std::move(amplitudes));
}

QuantumState QuantumState::mixed(BasisPtr basis, CMatrix rho) {
  if (!basis) throw DimensionError("null basis");
  const auto d = static_cast<Eigen::Index>(basis->size());
  if (rho.rows() != d || rho.cols() != d) throw DimensionError("density matrix shape differs from basis size");
  validate_density(rho);
  return QuantumState(std::move(basis), std::move(rho));
}

QuantumState QuantumState::basis_state(BasisPtr basis, std::size_t index) {
  if (!basis) throw DimensionError("null basis");
  if (index >= basis->size()) throw DimensionError("basis index out of range");
  CVector v = CVector::Zero(basis->size());
  v(index) = 1.0;
  return QuantumState(std::move(basis), std::move(v));
}

QuantumState QuantumState::from_factor(BasisPtr basis, const CMatrix& factor) {
  if (!basis) throw DimensionError("null basis");
  if (factor.rows() != static_cast<Eigen::Index>(basis->size()))
    throw DimensionError("factor row count differs from basis size");
  if (std::abs(factor.squaredNorm() - 1.0) > 1e-10) throw DomainError("factor does not have unit trace");
  CMatrix rho = factor * factor.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QuantumState(std::move(basis), std::move(rho));
}

const CVector& QuantumState::amplitudes() const {
  if (!is_pure()) throw DomainError("mixed state has no amplitude vector");
  return std::get<CVector>(rep_);
}

CMatrix QuantumState::density() const {
  if (is_pure()) {
    const auto& v = std::get<CVector>(rep_);
    return v * v.adjoint();
  }
  return std::get<CMatrix>(rep_);
}

RVector QuantumState::mode_populations() const {
  const RVector diag = fock_probabilities(*this);
  RVector n = RVector::Zero(basis_->modes());
  for (std::size_t i = 0; i < basis_->size(); ++i) {
    const auto& occ = basis_->occupation_of(i);
    for (int m = 0; m < basis_->modes(); ++m) n(m) += diag(i) * occ[m];
  }
  return n;
}

double QuantumState::total_photon_number() const { return mode_populations().sum(); }

void validate_density(const CMatrix& rho, double tolerance) {
  if (rho.rows() != rho.cols()) throw DimensionError("density matrix must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tolerance) throw DomainError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0, 0.0)) > tolerance) throw DomainError("density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) throw DomainError("density matrix has a negative eigenvalue");
}

QuantumState evolve(const QuantumState& state, const CMatrix& lifted) {
  const auto d = static_cast<Eigen::Index>(state.dim());
  if (lifted.rows() != d || lifted.cols() != d) throw DimensionError("operator dimension differs from state");
  if (state.is_pure()) return QuantumState::pure(state.basis_ptr(), lifted * state.amplitudes());
  CMatrix rho = lifted * state.density() * lifted.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QuantumState::mixed(state.basis_ptr(), std::move(rho));
}

QuantumState partial_trace(const QuantumState& state, std::span<const int> keep_modes) {
  const auto& basis = state.basis();
  const int m = basis.modes();
  const int k = static_cast<int>(keep_modes.size());
  if (k == 0 || k >= m) throw DimensionError("keep_modes must be a non-empty proper subset");
  std::vector<bool> keep(m, false);
  for (int mode : keep_modes) {
    if (mode < 0 || mode >= m || keep[mode]) throw DimensionError("invalid mode in keep_modes");
    keep[mode] = true;
  }
  auto reduced_basis = std::make_shared<const OccupationBasis>(OccupationBasis::up_to(k, basis.max_photons()));

  // Split each state into (kept occupation index, traced occupation).
  std::map<Occupation, std::vector<std::pair<std::size_t, std::size_t>>> by_env;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& occ = basis.occupation_of(i);
    Occupation kept(k), env;
    for (int j = 0; j < k; ++j) kept[j] = occ[keep_modes[j]];
    for (int mode = 0; mode < m; ++mode)
      if (!keep[mode]) env.push_back(occ[mode]);
    by_env[env].emplace_back(i, reduced_basis->index_of(kept));
  }

  const CMatrix rho = state.density();
  const auto dr = static_cast<Eigen::Index>(reduced_basis->size());
  CMatrix out = CMatrix::Zero(dr, dr);
  for (const auto& [env, members] : by_env)
    for (const auto& [ia, ra] : members)
      for (const auto& [ib, rb] : members) out(ra, rb) += rho(ia, ib);
  out = 0.5 * (out + out.adjoint()).eval();
  return QuantumState::mixed(std::move(reduced_basis), std::move(out));
}

double purity(const CMatrix& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho.cwiseAbs2().sum();
}

double purity(const QuantumState& state) {
  if (state.is_pure()) return std::pow(state.amplitudes().squaredNorm(), 2);
  return purity(state.density());
}

CMatrix psd_sqrt(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (a + a.adjoint()));
  RVector w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

double fidelity(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw DimensionError("fidelity of mismatched matrices");
  const CMatrix s = psd_sqrt(rho);
  const CMatrix inner = s * sigma * s;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  const double root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(root * root, 0.0, 1.0);
}

double fidelity(const QuantumState& rho, const QuantumState& sigma) {
  require_same_basis(rho, sigma);
  if (rho.is_pure() && sigma.is_pure()) return std::norm(rho.amplitudes().dot(sigma.amplitudes()));
  return fidelity(rho.density(), sigma.density());
}

RVector fock_probabilities(const QuantumState& state) {
  if (state.is_pure()) return state.amplitudes().cwiseAbs2();
  return state.density().diagonal().real().cwiseMax(0.0);
}

std::vector<std::int64_t> sample_counts(const RVector& probs, std::int64_t shots, std::mt19937_64& rng) {
  if (shots <= 0) throw DomainError("shots must be positive");
  if (probs.size() > 0 && probs.minCoeff() < 0.0) throw DomainError("negative probability");
  if (std::abs(probs.sum() - 1.0) > 1e-8) throw DomainError("probabilities do not sum to one");
  std::vector<std::int64_t> counts(probs.size(), 0);
  std::int64_t remaining = shots;
  double mass = 1.0;
  for (Eigen::Index i = 0; i < probs.size() && remaining > 0; ++i) {
    if (i == probs.size() - 1) {
      counts[i] = remaining;
      break;
    }
    const double q = mass > 0.0 ? std::clamp(probs(i) / mass, 0.0, 1.0) : 1.0;
    std::binomial_distribution<std::int64_t> draw(remaining, q);
    counts[i] = draw(rng);
    remaining -= counts[i];
    mass -= probs(i);
  }
  return counts;
}

std::vector<std::int64_t> sample_counts(const RVector& probs, std::int64_t shots, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_counts(probs, shots, rng);
}

}  // namespace qumem::fock
