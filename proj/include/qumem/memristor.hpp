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

#include <cstddef>
#include <deque>
#include <utility>

#include "qumem/common.hpp"

namespace qumem::memristor {

// Floor kept on the reflectivity so the input estimate n_meas / R stays finite.
inline constexpr double kRMin = 1e-3;

struct QubitInput {
  cplx alpha;
  cplx beta;

  /// Throws DomainError unless |alpha|^2 + |beta|^2 = 1 within 1e-10.
  static QubitInput make(cplx alpha, cplx beta);
  /// Real amplitudes sqrt(1 - n), sqrt(n).
  static QubitInput from_population(double beta2);
  double n_in() const { return std::norm(beta); }
};

struct LeakyCoupler {
  double eta;
  explicit LeakyCoupler(double eta);
};

enum class Law { Windowed, LowPass, Frozen };

const char* law_name(Law law);

class MemristorState {
 public:
  static MemristorState windowed(double window_s, double r0 = 0.5, double t0 = 0.0);
  static MemristorState lowpass(double f_cut_hz, double r0 = 0.5, double t0 = 0.0);
  static MemristorState frozen(double r);

  double reflectivity() const { return r_; }
  Law law() const { return law_; }
  double window() const { return window_; }
  double f_cut() const { return f_cut_; }
  double last_time() const { return t_last_; }
  std::size_t window_samples() const { return samples_.size(); }

  /// In-place version of update(); timestamps must be nondecreasing.
  void advance(double t, double n_in);

 private:
  MemristorState(Law law, double r0, double t0) : law_(law), r_(r0), t_last_(t0) {}

  void advance_windowed(double t, double n_in);
  void advance_lowpass(double t, double n_in);

  struct Sample {
    double t;
    double weighted;  // (n_in - 0.5) * dt
  };

  Law law_;
  double r_;
  double t_last_;
  double window_ = 0.0;
  double f_cut_ = 0.0;
  std::deque<Sample> samples_;
  double sum_ = 0.0;
  std::size_t since_resum_ = 0;
};

double mz_reflectivity(double theta);
double output_expectation(double n_in, double r);
double leaky_output_expectation(double n_in, double r, const LeakyCoupler& coupler);

/// Basis {|0>, |1>} of the output mode.
CMatrix output_state_single_rail(const QubitInput& q, double r);

/// Basis {vacuum, rail A, rail B}; `chi` is the phase picked up by the
/// transmitted amplitude on rail B.
CMatrix output_state_dual_rail(const QubitInput& q, double r, double chi = 0.0);

double purity_closed_form(double beta2, double r);
/// Tr(rho^2) of output_state_dual_rail, which differs from the single-rail form.
double purity_dual_rail(double beta2, double r);

double estimate_n_in(double n_meas, double r_prev);

MemristorState update_windowed(const MemristorState& s, double t, double n_in);
MemristorState update_lowpass(const MemristorState& s, double t, double n_in);
/// Dispatches on the state's law; frozen states are returned unchanged.
MemristorState update(const MemristorState& s, double t, double n_in);

struct ClassicalMemristorState {
  double w;
  double d;
  double r_low;
  double r_high;
  double mu;

  static ClassicalMemristorState make(double w, double d, double r_low, double r_high, double mu);
  double memristance() const { return r_low * w / d + r_high * (1.0 - w / d); }
};

/// Returns (voltage, next state).
std::pair<double, ClassicalMemristorState> classical_memristor_step(const ClassicalMemristorState& c,
                                                                     double current, double dt);

}  // namespace qumem::memristor
