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
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "qumem/common.hpp"

/// Multimode bosonic Fock space: occupation bases, lifting of mode unitaries
/// through matrix permanents, and density-operator utilities.
namespace qumem::fock {

using Occupation = std::vector<int>;

/// Ordered set of occupation vectors over `modes` modes whose total photon
/// number lies in [min_photons, max_photons].
///
/// States are sorted lexicographically descending, e.g. for two modes and one
/// photon: (1,0), (0,1). A fixed photon number gives binomial(m+p-1, p)
/// states; a range is used for sectors that include the vacuum.
class OccupationBasis {
 public:
  OccupationBasis(int modes, int min_photons, int max_photons);

  static OccupationBasis fixed(int modes, int photons) { return {modes, photons, photons}; }
  static OccupationBasis up_to(int modes, int max_photons) { return {modes, 0, max_photons}; }

  int modes() const { return modes_; }
  int min_photons() const { return min_photons_; }
  int max_photons() const { return max_photons_; }
  std::size_t size() const { return states_.size(); }

  const Occupation& occupation_of(std::size_t index) const;
  int photons_of(std::size_t index) const;
  /// Throws DimensionError if `occ` is not a member.
  std::size_t index_of(std::span<const int> occ) const;
  std::optional<std::size_t> find(std::span<const int> occ) const;
  const std::vector<Occupation>& states() const { return states_; }

  bool operator==(const OccupationBasis& other) const {
    return modes_ == other.modes_ && min_photons_ == other.min_photons_ &&
           max_photons_ == other.max_photons_;
  }

 private:
  int modes_;
  int min_photons_;
  int max_photons_;
  std::vector<Occupation> states_;
  std::map<Occupation, std::size_t, std::less<>> index_;
};

using BasisPtr = std::shared_ptr<const OccupationBasis>;

/// All m-mode, p-photon occupations. Throws DimensionError for m < 1 or p < 0.
OccupationBasis enumerate_basis(int modes, int photons);
BasisPtr make_basis(int modes, int photons);

/// Unitary acting on mode creation operators: a_j^dag -> sum_i U(i,j) a_i^dag.
class ModeUnitary {
 public:
  explicit ModeUnitary(CMatrix u, double tolerance = 1e-10);
  static ModeUnitary identity(int modes);

  const CMatrix& matrix() const { return u_; }
  int dimension() const { return static_cast<int>(u_.rows()); }
  ModeUnitary adjoint() const;
  ModeUnitary operator*(const ModeUnitary& rhs) const;

 private:
  CMatrix u_;
};

/// Balanced two-mode coupler (1/sqrt2)[[1, i], [i, 1]].
CMatrix balanced_coupler();
/// Two-mode coupler [[t, i r], [i r, t]] with r^2 = reflectivity.
CMatrix coupler(double reflectivity);
/// Embeds a k x k unitary acting on `modes` into the identity on `total_modes`.
ModeUnitary embed(const CMatrix& local, std::span<const int> modes, int total_modes);

/// Permanent by Ryser's inclusion-exclusion formula with Gray-code ordering.
cplx permanent(const CMatrix& a);

/// Permanent of the matrix obtained from `u` by repeating row i row_mult[i]
/// times and column j col_mult[j] times. Column repetitions are summed with
/// binomial weights so repeated columns cost nothing extra.
cplx permanent_repeated(const CMatrix& u, std::span<const int> row_mult,
                        std::span<const int> col_mult);

/// Matrix of the Fock-space operator induced by `u` on `basis`, with entries
/// <a|U|b> = perm(U[a,b]) / sqrt(prod a! prod b!). Sectors with different
/// photon number do not couple.
CMatrix lift_unitary(const ModeUnitary& u, const OccupationBasis& basis);

/// Lift of a unitary that only touches `modes`. Cheaper than embedding and
/// calling lift_unitary because only states that agree outside `modes` couple.
CMatrix lift_local(const CMatrix& local, std::span<const int> modes, const OccupationBasis& basis);

/// Pure amplitudes or a density operator over an occupation basis.
class QuantumState {
 public:
  static QuantumState pure(BasisPtr basis, CVector amplitudes);
  static QuantumState mixed(BasisPtr basis, CMatrix rho);
  static QuantumState basis_state(BasisPtr basis, std::size_t index);
  /// rho = K K^dag for a (d x r) factor K with unit Frobenius norm.
  static QuantumState from_factor(BasisPtr basis, const CMatrix& factor);

  bool is_pure() const { return std::holds_alternative<CVector>(rep_); }
  const CVector& amplitudes() const;
  CMatrix density() const;
  std::size_t dim() const { return basis_->size(); }
  const OccupationBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }

  /// Expected photon number in each mode.
  RVector mode_populations() const;
  double total_photon_number() const;

 private:
  QuantumState(BasisPtr basis, std::variant<CVector, CMatrix> rep)
      : basis_(std::move(basis)), rep_(std::move(rep)) {}

  BasisPtr basis_;
  std::variant<CVector, CMatrix> rep_;
};

/// Checks Hermiticity, unit trace and eigenvalues >= -1e-9.
void validate_density(const CMatrix& rho, double tolerance = 1e-10);

/// U|psi> or U rho U^dag. The lifted matrix must match the state dimension.
QuantumState evolve(const QuantumState& state, const CMatrix& lifted);

/// Reduced state on `keep_modes` (in the given order). The result lives on
/// OccupationBasis::up_to(keep_modes.size(), basis.max_photons()).
QuantumState partial_trace(const QuantumState& state, std::span<const int> keep_modes);

double purity(const QuantumState& state);
double purity(const CMatrix& rho);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const CMatrix& rho, const CMatrix& sigma);
double fidelity(const QuantumState& rho, const QuantumState& sigma);

/// Diagonal of rho in the Fock basis.
RVector fock_probabilities(const QuantumState& state);

/// Multinomial draw of `shots` outcomes. Deterministic for a given seed.
std::vector<std::int64_t> sample_counts(const RVector& probs, std::int64_t shots, std::uint64_t seed);
std::vector<std::int64_t> sample_counts(const RVector& probs, std::int64_t shots, std::mt19937_64& rng);

/// Positive square root of a Hermitian PSD matrix (negative eigenvalues are
/// clipped).
CMatrix psd_sqrt(const CMatrix& a);

}  // namespace qumem::fock
