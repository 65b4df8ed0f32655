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
#include <random>

#include "oracles.hpp"
#include "qumem/reservoir.hpp"

namespace qumem::reservoir {
namespace {

ReservoirConfig small_config() {
  ReservoirConfig c;
  c.modes = 6;
  c.photons = 2;
  c.window = 4;
  c.mesh_seed = 3;
  return c;
}

std::vector<EncodedInput> random_sequence(const fock::OccupationBasis& b, int len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<EncodedInput> seq;
  for (int k = 0; k < len; ++k) {
    std::vector<double> v(8);
    for (auto& x : v) x = u(rng);
    seq.push_back(amplitude_encode(v, b));
  }
  return seq;
}

TEST(Encoding, Amplitude) {
  const auto b = fock::enumerate_basis(9, 3);
  const std::vector<double> v{3.0, 4.0};
  const auto x = amplitude_encode(v, b);
  EXPECT_NEAR(x.factor(0, 0).real(), 0.6, 1e-15);
  EXPECT_NEAR(x.factor(1, 0).real(), 0.8, 1e-15);
  EXPECT_FALSE(x.fallback);
  const std::vector<double> e1{0.0, 2.0};
  EXPECT_NEAR(amplitude_encode(e1, b).factor(1, 0).real(), 1.0, 1e-15);
  const std::vector<double> zero(18, 0.0);
  const auto z = amplitude_encode(zero, b);
  EXPECT_TRUE(z.fallback);
  EXPECT_EQ(z.factor(0, 0), cplx(1.0));
  EXPECT_THROW(amplitude_encode(std::vector<double>(200, 1.0), b), DimensionError);
}

TEST(Encoding, CoherentMixture) {
  const auto b = fock::enumerate_basis(9, 3);
  const auto d = static_cast<int>(b.size());
  const CVector vac = coherent_amplitudes(0, d);
  EXPECT_EQ(vac(0), cplx(1.0));
  std::vector<double> ej(18, 0.0);
  ej[5] = 2.0;
  auto basis = fock::make_basis(9, 3);
  const auto pure = coherent_encode(ej, b, d).state(basis);
  EXPECT_NEAR(fock::purity(pure), 1.0, 1e-12);
  // Poisson photon statistics with mean 25 for the k = 5 state.
  const RVector p = fock::fock_probabilities(pure);
  double mean = 0.0;
  for (int n = 0; n < d; ++n) mean += n * p(n);
  EXPECT_NEAR(mean, 25.0, 1e-9);
  std::vector<double> w(18);
  for (int j = 0; j < 18; ++j) w[j] = (j % 3) * 0.1;
  const auto mix = coherent_encode(w, b, d).state(basis);
  EXPECT_NO_THROW(fock::validate_density(mix.density(), 1e-10));
  EXPECT_LT(fock::purity(mix), 1.0);
  EXPECT_THROW(coherent_encode(std::vector<double>(18, 0.0), b, d), DomainError);
  std::vector<double> neg(18, 0.1);
  neg[2] = -0.1;
  EXPECT_THROW(coherent_encode(neg, b, d), DomainError);
}

TEST(Mesh, UnitaryAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto u = build_mesh(9, seed);
    EXPECT_LT((u.matrix().adjoint() * u.matrix() - CMatrix::Identity(9, 9)).cwiseAbs().maxCoeff(), 1e-10);
  }
  EXPECT_EQ(build_mesh(9, 4).matrix(), build_mesh(9, 4).matrix());
  EXPECT_NE(build_mesh(9, 4).matrix(), build_mesh(9, 5).matrix());
  EXPECT_EQ(random_mesh_layout(9, 1).size(), 36u);
}

TEST(Mesh, SingleBalancedCoupler) {
  const std::vector<CouplerSpec> one{{0, 0.5, 0.0}};
  EXPECT_LT((mesh_from_couplers(2, one).matrix() - fock::balanced_coupler()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MemristorLayer, TransparentWhenReflectivityIsZero) {
  // Holds for states with empty feedback rails; photons already sitting on a
  // feedback rail are counted and returned even when R = 0.
  const Reservoir res(ReservoirConfig{});
  const auto& b = *res.basis();
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  CVector psi = CVector::Zero(b.size());
  for (std::size_t s = 0; s < b.size(); ++s) {
    const auto& occ = b.occupation_of(s);
    if (occ[2] + occ[5] + occ[8] == 0) psi(s) = cplx(g(rng), g(rng));
  }
  psi.normalize();
  const auto rho = fock::QuantumState::pure(res.basis(), psi);
  const std::vector<double> zero(3, 0.0);
  const auto [out, fb] = res.memristor_layer(rho, zero);
  EXPECT_LT((out.density() - rho.density()).cwiseAbs().maxCoeff(), 1e-12);
  for (double f : fb) EXPECT_NEAR(f, 0.0, 1e-15);
}

TEST(MemristorLayer, FeedbackProbabilityAndConservation) {
  const Reservoir res(ReservoirConfig{});
  const auto& b = *res.basis();
  // One photon on the through rail of memristor 0, two elsewhere.
  const std::vector<int> occ{0, 1, 0, 1, 0, 0, 1, 0, 0};
  const auto s = fock::QuantumState::basis_state(res.basis(), b.index_of(occ));
  const std::vector<double> r{0.3, 0.6, 0.9};
  const auto [out, fb] = res.memristor_layer(s, r);
  EXPECT_NEAR(fb[0], 0.3, 1e-12);
  EXPECT_NEAR(fb[1], 0.0, 1e-12);
  EXPECT_NEAR(fb[2], 0.0, 1e-12);
  EXPECT_NEAR(out.total_photon_number(), 3.0, 1e-12);
  EXPECT_NEAR(out.density().trace().real(), 1.0, 1e-12);
  // Reinjection returns every photon to the through rail.
  EXPECT_NEAR(out.mode_populations()(1), 1.0, 1e-12);

  const std::vector<double> full{1.0, 1.0, 1.0};
  const auto psi = sample_separable(12, res.dim(), 3);
  const auto mixed = res.memristor_layer(fock::QuantumState::pure(res.basis(), psi), full).first;
  EXPECT_NEAR(mixed.total_photon_number(), 3.0, 1e-12);
  EXPECT_LT(fock::purity(mixed), 1.0);
  const std::vector<double> wrong{0.5};
  EXPECT_THROW(res.memristor_layer(s, wrong), DimensionError);
}

TEST(MemristorLayer, MatchesExplicitKrausSum) {
  // Reference built from full lifted matrices and projectors.
  auto cfg = small_config();
  const Reservoir res(cfg);
  const auto& b = *res.basis();
  const auto d = static_cast<Eigen::Index>(b.size());
  const CVector psi = sample_entangled(3, b.size(), 12);
  CMatrix rho = psi * psi.adjoint();
  const std::vector<double> r{0.35, 0.8};
  for (int m = 0; m < 2; ++m) {
    const std::vector<int> pair{3 * m + 1, 3 * m + 2};
    const CMatrix mz = fock::lift_local(fock::coupler(r[m]), pair, b);
    const CMatrix after = mz * rho * mz.adjoint();
    CMatrix next = CMatrix::Zero(d, d);
    for (int n = 0; n <= cfg.photons; ++n) {
      CMatrix k = CMatrix::Zero(d, d);
      for (Eigen::Index s = 0; s < d; ++s) {
        auto occ = b.occupation_of(s);
        if (occ[3 * m + 2] != n) continue;
        occ[3 * m + 1] += n;
        occ[3 * m + 2] = 0;
        k(b.index_of(occ), s) = 1.0;
      }
      next += k * after * k.adjoint();
    }
    rho = next;
  }
  const auto got = res.memristor_layer(fock::QuantumState::pure(res.basis(), psi), r).first;
  EXPECT_LT((got.density() - rho).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Step, ProbabilitiesNormalisedAndFrozenIsMemoryless) {
  auto cfg = small_config();
  cfg.feedback = false;
  const Reservoir res(cfg);
  const auto seq = random_sequence(*res.basis(), 5, 9);
  auto st = res.initial_state();
  const auto a = res.step(st, seq[0]).probs;
  const auto again = res.step(st, seq[0]).probs;
  EXPECT_NEAR(a.sum(), 1.0, 1e-12);
  EXPECT_LT((a - again).cwiseAbs().maxCoeff(), 1e-15);
  // Only the final input matters.
  auto shuffled = seq;
  std::swap(shuffled[0], shuffled[3]);
  std::swap(shuffled[1], shuffled[2]);
  EXPECT_LT((res.run_sequence(seq) - res.run_sequence(shuffled)).cwiseAbs().maxCoeff(), 1e-14);
  const std::vector<EncodedInput> last{seq.back()};
  EXPECT_LT((res.run_sequence(seq) - res.run_sequence(last)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Step, FeedbackCarriesMemory) {
  const Reservoir res(small_config());
  int differing = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto a = random_sequence(*res.basis(), 6, 100 + s);
    auto b = a;
    b[0] = random_sequence(*res.basis(), 1, 500 + s)[0];
    const double diff = (res.run_sequence(a) - res.run_sequence(b)).cwiseAbs().maxCoeff();
    differing += diff > 1e-12;
  }
  EXPECT_EQ(differing, 10);
}

TEST(Step, ReflectivitiesFollowTheWindowLaw) {
  auto cfg = small_config();
  const Reservoir res(cfg);
  const auto seq = random_sequence(*res.basis(), 6, 4);
  auto st = res.initial_state();
  std::vector<std::vector<double>> history(2);
  for (const auto& x : seq) {
    const auto r_prev = st.reflectivities();
    const auto out = res.step(st, x);
    for (int m = 0; m < 2; ++m) history[m].push_back(out.feedback[m] / r_prev[m] - 0.5);
    for (int m = 0; m < 2; ++m) {
      double sum = 0.0;
      const auto& h = history[m];
      for (std::size_t k = h.size() > 4 ? h.size() - 4 : 0; k < h.size(); ++k) sum += h[k];
      EXPECT_NEAR(st.reflectivities()[m], std::clamp(0.5 + sum / cfg.window, memristor::kRMin, 1.0), 1e-12);
    }
  }
}

TEST(Step, SampledConvergesToExact) {
  auto cfg = small_config();
  const Reservoir exact(cfg);
  cfg.shots = 100000;
  cfg.shot_seed = 77;
  const Reservoir sampled(cfg);
  const auto seq = random_sequence(*exact.basis(), 3, 21);
  const RVector p = exact.run_sequence(seq), q = sampled.run_sequence(seq);
  EXPECT_NEAR(q.sum(), 1.0, 1e-12);
  double kl = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i)
    if (q(i) > 0) kl += q(i) * std::log(q(i) / p(i));
  EXPECT_LT(kl, 1e-3);
  EXPECT_TRUE(sampled.run_sequence(seq) == q);
}

TEST(Step, PhotonNumberConservedEndToEnd) {
  const Reservoir res(ReservoirConfig{});
  std::vector<double> w(18, 0.0);
  w[1] = 0.5;
  w[4] = 0.5;
  auto st = res.initial_state();
  const auto x = coherent_encode(w, *res.basis(), static_cast<int>(res.dim()));
  const RVector p = res.step(st, x).probs;
  double n = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) n += p(i) * res.basis()->photons_of(i);
  EXPECT_NEAR(n, 3.0, 1e-12);
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
}

TEST(States, SeparableHasSchmidtRankOne) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const CVector v = sample_separable(12, 165, s);
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    EXPECT_LT(entanglement_entropy(v, 12), 1e-10);
  }
  EXPECT_THROW(sample_separable(13, 165, 0), DimensionError);
}

TEST(States, HaarSamplesAreEntangled) {
  int above = 0;
  const int n = 10000;
  for (int s = 0; s < n; ++s) above += entanglement_entropy(sample_entangled(12, 165, s), 12) > 0.1;
  EXPECT_GE(above, 0.99 * n);
  EXPECT_EQ(sample_entangled(12, 165, 4), sample_entangled(12, 165, 4));
}

}  // namespace
}  // namespace qumem::reservoir
