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
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qumem/memristor.hpp"

namespace qumem::hysteresis {

struct DriveConfig {
  double t_osc = 10.0;
  int n_periods = 3;
  double dt = 0.0;  // 0 selects t_osc / 1000

  double step() const { return dt > 0.0 ? dt : t_osc / 1000.0; }
  void validate() const;
};

enum class Noise { Exact, Poisson };

struct DetectionConfig {
  double max_rate = 3e4;  // counts/s for a unit photon flux
  double rc = 0.1;
  Noise noise = Noise::Exact;
  std::uint64_t seed = 0;
};

// Pulse counter followed by a first-order RC filter. Returns rate estimates
// normalised by max_rate.
class Detector {
 public:
  Detector(const DetectionConfig& config, double dt);

  double estimate(double true_rate);
  /// Mean number of counts collected within one RC time at the given rate.
  double counts_per_window(double rate) const { return rate * config_.rc; }

 private:
  DetectionConfig config_;
  double dt_;
  double decay_;
  double filtered_ = 0.0;
  std::mt19937_64 rng_;
};

struct TraceRow {
  double t;
  double n_in;
  double n_out;
  double r;
};

struct Trace {
  std::vector<TraceRow> rows;
  double window = 0.0;  // integration time, 0 for non-windowed laws
  double t_osc = 0.0;
  double f_cut = 0.0;
  std::string law;
  std::string noise;
  std::uint64_t seed = 0;
};

Trace run_closed_loop(const DriveConfig& drive, const memristor::MemristorState& mem, const DetectionConfig& det);
Trace run_lpf_loop(const DriveConfig& drive, double f_cut, const DetectionConfig& det);

enum class Regime { LowFreq, Intermediate, HighFreq };

Regime classify_regime(double window, double t_osc);
const char* regime_name(Regime regime);

/// RMS of n_out - expected(n_in) over rows after `skip_periods` drive periods.
double rms_deviation(const Trace& trace, const std::function<double(double)>& expected, int skip_periods = 1);

/// Shoelace area enclosed by the (n_in, n_out) orbit over the last full period.
double orbit_area(const Trace& trace);

/// Largest n_out among steady-state rows with n_in <= threshold.
double max_output_near_origin(const Trace& trace, double threshold, int skip_periods = 1);

inline double nonlinear_limit(double n) { return n - n * n; }
inline double linear_limit(double n) { return 0.5 * n; }

}  // namespace qumem::hysteresis
