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

#include "qumem/memristor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qumem::memristor {
namespace {

void require_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(what) + " must lie in [0,1]");
}

double clamp_r(double r) { return std::clamp(r, kRMin, 1.0); }

}  // namespace

QubitInput QubitInput::make(cplx alpha, cplx beta) {
  const double norm = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm - 1.0) > 1e-10) throw DomainError("qubit amplitudes are not normalised");
  return {alpha, beta};
}

QubitInput QubitInput::from_population(double beta2) {
  require_unit(beta2, "photon population");
  return {std::sqrt(1.0 - beta2), std::sqrt(beta2)};
}

LeakyCoupler::LeakyCoupler(double e) : eta(e) {
  if (!(e >= 0.0 && e < 0.5)) throw DomainError("leakage factor must lie in [0, 0.5)");
}

const char* law_name(Law law) {
  switch (law) {
    case Law::Windowed: return "windowed";
    case Law::LowPass: return "lowpass";
    case Law::Frozen: return "frozen";
  }
  return "unknown";
}

MemristorState MemristorState::windowed(double window_s, double r0, double t0) {
  if (!(window_s > 0.0)) throw ConfigError("integration window must be positive");
  MemristorState s(Law::Windowed, clamp_r(r0), t0);
  s.window_ = window_s;
  return s;
}

MemristorState MemristorState::lowpass(double f_cut_hz, double r0, double t0) {
  if (!(f_cut_hz > 0.0)) throw ConfigError("cutoff frequency must be positive");
  MemristorState s(Law::LowPass, clamp_r(r0), t0);
  s.f_cut_ = f_cut_hz;
  return s;
}

MemristorState MemristorState::frozen(double r) {
  require_unit(r, "reflectivity");
  return MemristorState(Law::Frozen, r, 0.0);
}

void MemristorState::advance(double t, double n_in) {
  switch (law_) {
    case Law::Windowed: advance_windowed(t, n_in); break;
    case Law::LowPass: advance_lowpass(t, n_in); break;
    case Law::Frozen: break;
  }
}

void MemristorState::advance_windowed(double t, double n_in) {
  if (t < t_last_) throw DomainError("sample timestamps must be nondecreasing");
  const double dt = t - t_last_;
  t_last_ = t;
  samples_.push_back({t, (n_in - 0.5) * dt});
  sum_ += samples_.back().weighted;
  const double cutoff = t - window_ + 1e-9 * window_;
  while (!samples_.empty() && samples_.front().t <= cutoff) {
    sum_ -= samples_.front().weighted;
    samples_.pop_front();
  }
  // The running sum drifts slowly under add/subtract; rebuild it now and then.
  if (++since_resum_ >= 4096) {
    sum_ = 0.0;
    for (const auto& s : samples_) sum_ += s.weighted;
    since_resum_ = 0;
  }
  r_ = clamp_r(0.5 + sum_ / window_);
}

void MemristorState::advance_lowpass(double t, double n_in) {
  if (t < t_last_) throw DomainError("sample timestamps must be nondecreasing");
  const double dt = t - t_last_;
  t_last_ = t;
  const double decay = std::exp(-2.0 * kPi * f_cut_ * dt);
  r_ = clamp_r(n_in + (r_ - n_in) * decay);
}

double mz_reflectivity(double theta) { return 0.5 * (1.0 + std::cos(theta)); }

double output_expectation(double n_in, double r) {
  require_unit(n_in, "input photon number");
  require_unit(r, "reflectivity");
  return (1.0 - r) * n_in;
}

double leaky_output_expectation(double n_in, double r, const LeakyCoupler& coupler) {
  require_unit(n_in, "input photon number");
  require_unit(r, "reflectivity");
  if (!(coupler.eta >= 0.0 && coupler.eta < 0.5)) throw DomainError("leakage factor must lie in [0, 0.5)");
  return (coupler.eta * r + (1.0 - coupler.eta) * (1.0 - r)) * n_in;
}

CMatrix output_state_single_rail(const QubitInput& q, double r) {
  require_unit(r, "reflectivity");
  const double a2 = std::norm(q.alpha);
  const double b2 = std::norm(q.beta);
  const cplx coh = q.alpha * std::conj(q.beta) * std::sqrt(1.0 - r);
  CMatrix rho(2, 2);
  rho << a2 + b2 * r, coh, std::conj(coh), b2 * (1.0 - r);
  return rho;
}

CMatrix output_state_dual_rail(const QubitInput& q, double r, double chi) {
  require_unit(r, "reflectivity");
  const double a2 = std::norm(q.alpha);
  const double b2 = std::norm(q.beta);
  const cplx transmitted = q.beta * std::sqrt(1.0 - r) * std::polar(1.0, chi);
  const cplx coh = q.alpha * std::conj(transmitted);
  CMatrix rho = CMatrix::Zero(3, 3);
  rho(0, 0) = b2 * r;
  rho(1, 1) = a2;
  rho(2, 2) = b2 * (1.0 - r);
  rho(1, 2) = coh;
  rho(2, 1) = std::conj(coh);
  return rho;
}

double purity_closed_form(double beta2, double r) {
  require_unit(beta2, "photon population");
  require_unit(r, "reflectivity");
  return 1.0 - 2.0 * beta2 * beta2 * r * (1.0 - r);
}

double purity_dual_rail(double beta2, double r) {
  require_unit(beta2, "photon population");
  require_unit(r, "reflectivity");
  const double lost = beta2 * r;
  return 1.0 - 2.0 * lost * (1.0 - lost);
}

double estimate_n_in(double n_meas, double r_prev) {
  if (!(r_prev >= kRMin * (1.0 - 1e-12))) throw DomainError("reflectivity below the controller floor");
  return std::clamp(n_meas / r_prev, 0.0, 1.0);
}

MemristorState update_windowed(const MemristorState& s, double t, double n_in) {
  if (s.law() != Law::Windowed) throw ConfigError("state does not use the windowed law");
  MemristorState next = s;
  next.advance(t, n_in);
  return next;
}

MemristorState update_lowpass(const MemristorState& s, double t, double n_in) {
  if (s.law() != Law::LowPass) throw ConfigError("state does not use the low-pass law");
  MemristorState next = s;
  next.advance(t, n_in);
  return next;
}

MemristorState update(const MemristorState& s, double t, double n_in) {
  MemristorState next = s;
  next.advance(t, n_in);
  return next;
}

ClassicalMemristorState ClassicalMemristorState::make(double w, double d, double r_low, double r_high,
                                                      double mu) {
  if (!(d > 0.0)) throw DomainError("junction thickness must be positive");
  if (!(w >= 0.0 && w <= d)) throw DomainError("doped width must lie in [0, D]");
  if (!(r_low >= 0.0 && r_low < r_high)) throw DomainError("need 0 <= R_low < R_high");
  return {w, d, r_low, r_high, mu};
}

std::pair<double, ClassicalMemristorState> classical_memristor_step(const ClassicalMemristorState& c,
                                                                     double current, double dt) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  const double v = c.memristance() * current;
  ClassicalMemristorState next = c;
  next.w = std::clamp(c.w + c.mu * (c.r_high / c.d) * current * dt, 0.0, c.d);
  return {v, next};
}

}  // namespace qumem::memristor
