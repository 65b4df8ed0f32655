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

#include "qumem/tomography.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "qumem/fock.hpp"
#include "qumem/memristor.hpp"

namespace qumem::tomography {
namespace {

constexpr double kNominalShots = 1e6;

CMatrix block_of(const CMatrix& rho) {
  if (rho.rows() != 3 || rho.cols() != 3) throw DimensionError("expected a 3x3 density matrix");
  return rho.bottomRightCorner(2, 2);
}

struct Likelihood {
  double value;
  CMatrix sigma;
  CMatrix grad;  // ascent direction in factor space
};

Likelihood evaluate(const CMatrix& t, std::span<const SettingCounts> freq, std::span<const CMatrix> unitaries) {
  const double tau = t.squaredNorm();
  const CMatrix sigma = t * t.adjoint() / tau;
  double value = 0.0;
  CMatrix g = CMatrix::Zero(2, 2);
  for (std::size_t s = 0; s < freq.size(); ++s) {
    const CMatrix& u = unitaries[s];
    const CMatrix rotated = u * sigma * u.adjoint();
    const double f[2] = {freq[s].a, freq[s].b};
    for (int o = 0; o < 2; ++o) {
      if (f[o] <= 0.0) continue;
      const double p = std::max(rotated(o, o).real(), 1e-300);
      value += f[o] * std::log(p);
      g += (f[o] / p) * u.row(o).adjoint() * u.row(o);
    }
  }
  const cplx gs = (g * sigma).trace();
  const CMatrix h = g - gs.real() * CMatrix::Identity(2, 2);
  return {value, sigma, (2.0 / tau) * h * t};
}

}  // namespace

std::vector<TomographySetting> default_settings() {
  return {{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.0}, {0.5, kPi / 2.0}};
}

CMatrix analysis_unitary(const TomographySetting& s) {
  CMatrix phase = CMatrix::Identity(2, 2);
  phase(0, 0) = std::polar(1.0, s.phase);
  return fock::coupler(s.reflectivity) * phase;
}

std::array<double, 3> detection_probabilities(const CMatrix& rho, const TomographySetting& s) {
  const CMatrix u = analysis_unitary(s);
  const CMatrix rotated = u * block_of(rho) * u.adjoint();
  return {std::max(rotated(0, 0).real(), 0.0), std::max(rotated(1, 1).real(), 0.0), std::max(rho(0, 0).real(), 0.0)};
}

std::vector<SettingCounts> simulate_counts(const CMatrix& rho, std::span<const TomographySetting> settings,
                                           std::int64_t shots, std::uint64_t seed) {
  if (shots < 0) throw DomainError("shots must be non-negative");
  std::mt19937_64 rng(seed);
  std::vector<SettingCounts> out;
  for (const auto& s : settings) {
    const auto p = detection_probabilities(rho, s);
    if (shots == 0) {
      out.push_back({kNominalShots * p[0], kNominalShots * p[1], kNominalShots * p[2]});
      continue;
    }
    RVector probs(3);
    probs << p[0], p[1], p[2];
    probs /= probs.sum();
    const auto c = fock::sample_counts(probs, shots, rng);
    out.push_back({static_cast<double>(c[0]), static_cast<double>(c[1]), static_cast<double>(c[2])});
  }
  return out;
}

bool informationally_complete(std::span<const TomographySetting> settings) {
  // Each detector projector is a Hermitian 2x2 operator, i.e. a real 4-vector.
  RMatrix span(4, 2 * settings.size());
  for (std::size_t s = 0; s < settings.size(); ++s) {
    const CMatrix u = analysis_unitary(settings[s]);
    for (int o = 0; o < 2; ++o) {
      const CMatrix e = u.row(o).adjoint() * u.row(o);
      span.col(2 * s + o) << e(0, 0).real(), e(1, 1).real(), e(0, 1).real(), e(0, 1).imag();
    }
  }
  if (span.cols() == 0) return false;
  Eigen::JacobiSVD<RMatrix> svd(span);
  svd.setThreshold(1e-9);
  return svd.rank() == 4;
}

double p00_estimate(std::span<const SettingCounts> counts) {
  double c = 0.0, total = 0.0;
  for (const auto& k : counts) {
    if (k.a < 0.0 || k.b < 0.0 || k.c < 0.0) throw DomainError("negative counts");
    c += k.c;
    total += k.a + k.b + k.c;
  }
  if (total == 0.0) throw DomainError("all counts are zero");
  return c / total;
}

ReconstructionReport mle_reconstruct(std::span<const SettingCounts> counts, std::span<const TomographySetting> settings,
                                     double p00, const MleOptions& options) {
  if (counts.size() != settings.size()) throw DimensionError("one count record per setting expected");
  if (!(p00 >= 0.0 && p00 <= 1.0)) throw DomainError("p00 must lie in [0,1]");
  double detected = 0.0, total = 0.0;
  for (const auto& k : counts) {
    if (k.a < 0.0 || k.b < 0.0 || k.c < 0.0) throw DomainError("negative counts");
    detected += k.a + k.b;
    total += k.a + k.b + k.c;
  }
  if (total == 0.0) throw DomainError("all counts are zero");

  ReconstructionReport report;
  report.complete = informationally_complete(settings);
  CMatrix sigma = 0.5 * CMatrix::Identity(2, 2);
  if (detected > 0.0) {
    std::vector<SettingCounts> freq;
    std::vector<CMatrix> unitaries;
    for (std::size_t s = 0; s < counts.size(); ++s) {
      freq.push_back({counts[s].a / detected, counts[s].b / detected, 0.0});
      unitaries.push_back(analysis_unitary(settings[s]));
    }
    CMatrix t = CMatrix::Identity(2, 2) / std::sqrt(2.0);
    auto cur = evaluate(t, freq, unitaries);
    double step = 1.0;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
      const double slope = cur.grad.squaredNorm();
      if (slope < 1e-30) break;
      step = std::min(step * 2.0, 1e6);
      Likelihood next{};
      bool accepted = false;
      while (step > 1e-20) {
        CMatrix trial = t + step * cur.grad;
        trial /= trial.norm();
        next = evaluate(trial, freq, unitaries);
        if (next.value >= cur.value + 1e-4 * step * slope) {
          t = trial;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      const double change = std::abs(next.value - cur.value);
      cur = std::move(next);
      if (change <= options.tolerance * std::max(std::abs(cur.value), 1e-12)) break;
    }
    sigma = cur.sigma;
    report.iterations = it;
    report.log_likelihood = cur.value;
  }
  report.rho = CMatrix::Zero(3, 3);
  report.rho(0, 0) = p00;
  report.rho.bottomRightCorner(2, 2) = (1.0 - p00) * sigma;
  report.rho /= report.rho.trace().real();
  report.purity = fock::purity(report.rho);
  return report;
}

void score(ReconstructionReport& report, const CMatrix& reference) {
  report.fidelity = fock::fidelity(report.rho, project_to_density(reference));
}

double mz_transmitted_phase(double reflectivity) {
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0)) throw DomainError("reflectivity outside [0,1]");
  return std::acos(std::sqrt(reflectivity)) + kPi / 2.0;
}

double fit_global_phase(std::span<const CoherenceSample> samples) {
  cplx z = 0.0;
  for (const auto& s : samples) {
    const double a = std::sqrt((1.0 - s.beta2) * s.beta2 * (1.0 - s.reflectivity));
    z += a * std::conj(s.coherence) * std::polar(1.0, -mz_transmitted_phase(s.reflectivity));
  }
  if (std::abs(z) < 1e-12) throw DomainError("no coherence to fit a phase to");
  double g = std::arg(z);
  if (g < 0.0) g += 2.0 * kPi;
  return g;
}

std::vector<Fixture> table_fixtures(double phi_global) {
  std::vector<Fixture> out;
  for (double b2 : {0.0, 0.3, 0.7, 1.0}) {
    for (double r : {0.0, 0.3, 0.5, 0.7, 1.0}) {
      // Without a photon the reflectivity has no effect; only one such row is kept.
      if (b2 == 0.0 && r != 0.0) continue;
      const auto q = memristor::QubitInput::from_population(b2);
      const double chi = mz_transmitted_phase(r) + phi_global;
      out.push_back({b2, r, memristor::output_state_dual_rail(q, r, chi)});
    }
  }
  return out;
}

ReferenceTable load_reference_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed fixture file: ") + e.what());
  }
  auto matrix = [](const nlohmann::json& m) {
    CMatrix out(3, 3);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out(r, c) = {m.at(r).at(c).at(0).get<double>(), m.at(r).at(c).at(1).get<double>()};
    return out;
  };
  ReferenceTable table;
  try {
    table.phi_global = j.at("global_phase").get<double>();
    for (const auto& f : j.at("fixtures")) {
      table.fixtures.push_back({f.at("index").get<int>(), f.at("beta2").get<double>(),
                                f.at("reflectivity").get<double>(), matrix(f.at("rho_theory")),
                                matrix(f.at("rho_experiment")), f.at("fidelity_percent").get<double>(),
                                f.at("purity_theory").get<double>(), f.at("purity_experiment").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed fixture file: ") + e.what());
  }
  return table;
}

CMatrix project_to_density(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (a + a.adjoint()));
  RVector w = es.eigenvalues().cwiseMax(0.0);
  if (w.sum() <= 0.0) throw DomainError("matrix has no positive part");
  w /= w.sum();
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace qumem::tomography
