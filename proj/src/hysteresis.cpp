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

#include "qumem/hysteresis.hpp"

#include <algorithm>
#include <cmath>

namespace qumem::hysteresis {
namespace {

double drive_at(double t, double t_osc) {
  const double s = std::sin(kPi * t / t_osc);
  return s * s;
}

Trace run_loop(const DriveConfig& drive, memristor::MemristorState mem, const DetectionConfig& det) {
  const double dt = drive.step();
  const auto steps = static_cast<std::size_t>(std::llround(drive.n_periods * drive.t_osc / dt));
  Detector detector(det, dt);
  Trace trace;
  trace.t_osc = drive.t_osc;
  trace.law = memristor::law_name(mem.law());
  trace.noise = det.noise == Noise::Exact ? "exact" : "poisson";
  trace.seed = det.seed;
  trace.rows.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double n_in = drive_at(t, drive.t_osc);
    const double r = mem.reflectivity();
    // Photons routed to the feedback detector.
    const double n_meas = detector.estimate(r * n_in * det.max_rate);
    const double n_est = memristor::estimate_n_in(n_meas, std::max(r, memristor::kRMin));
    trace.rows.push_back({t, n_in, (1.0 - r) * n_in, r});
    mem.advance(t, n_est);
  }
  return trace;
}

}  // namespace

void DriveConfig::validate() const {
  if (!(t_osc > 0.0)) throw ConfigError("oscillation period must be positive");
  if (n_periods < 1) throw ConfigError("need at least one drive period");
  if (!(step() > 0.0) || step() > t_osc / 200.0) throw ConfigError("time step must satisfy 0 < dt <= T_osc/200");
}

Detector::Detector(const DetectionConfig& config, double dt)
    : config_(config), dt_(dt), decay_(std::exp(-dt / config.rc)), rng_(config.seed) {
  if (!(config.max_rate > 0.0)) throw ConfigError("max_rate must be positive");
  if (!(config.rc > 0.0)) throw ConfigError("RC time constant must be positive");
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
}

double Detector::estimate(double true_rate) {
  if (true_rate < 0.0 || true_rate > config_.max_rate * (1.0 + 1e-12))
    throw DomainError("rate outside [0, max_rate]");
  if (config_.noise == Noise::Exact) return true_rate / config_.max_rate;
  std::poisson_distribution<long long> pulses(true_rate * dt_);
  const double counts = true_rate > 0.0 ? static_cast<double>(pulses(rng_)) : 0.0;
  filtered_ = decay_ * filtered_ + (1.0 - decay_) * counts / dt_;
  return filtered_ / config_.max_rate;
}

Trace run_closed_loop(const DriveConfig& drive, const memristor::MemristorState& mem, const DetectionConfig& det) {
  drive.validate();
  if (det.noise == Noise::Poisson && mem.law() == memristor::Law::Windowed && det.rc >= mem.window())
    throw ConfigError("RC time constant must be shorter than the integration window");
  Trace trace = run_loop(drive, mem, det);
  trace.window = mem.law() == memristor::Law::Windowed ? mem.window() : 0.0;
  trace.f_cut = mem.f_cut();
  return trace;
}

Trace run_lpf_loop(const DriveConfig& drive, double f_cut, const DetectionConfig& det) {
  drive.validate();
  if (det.noise == Noise::Poisson && det.rc >= drive.t_osc) throw ConfigError("RC time constant must be shorter than the drive period");
  Trace trace = run_loop(drive, memristor::MemristorState::lowpass(f_cut), det);
  trace.f_cut = f_cut;
  return trace;
}

Regime classify_regime(double window, double t_osc) {
  if (!(window > 0.0 && t_osc > 0.0)) throw DomainError("window and period must be positive");
  if (window <= t_osc / 20.0) return Regime::LowFreq;
  if (window >= t_osc) return Regime::HighFreq;
  return Regime::Intermediate;
}

const char* regime_name(Regime regime) {
  switch (regime) {
    case Regime::LowFreq: return "low-frequency";
    case Regime::Intermediate: return "intermediate";
    case Regime::HighFreq: return "high-frequency";
  }
  return "unknown";
}

double rms_deviation(const Trace& trace, const std::function<double(double)>& expected, int skip_periods) {
  const double start = skip_periods * trace.t_osc;
  double acc = 0.0;
  std::size_t n = 0;
  for (const auto& row : trace.rows) {
    if (row.t < start) continue;
    const double e = row.n_out - expected(row.n_in);
    acc += e * e;
    ++n;
  }
  if (n == 0) throw DomainError("no rows after the warm-up period");
  return std::sqrt(acc / static_cast<double>(n));
}

double orbit_area(const Trace& trace) {
  if (trace.rows.size() < 2) return 0.0;
  const double dt = trace.rows[1].t - trace.rows[0].t;
  const double covered = trace.rows.back().t + dt;
  const double full = std::floor(covered / trace.t_osc + 1e-9);
  if (full < 1.0) return 0.0;
  const double start = (full - 1.0) * trace.t_osc;
  std::vector<const TraceRow*> period;
  for (const auto& row : trace.rows)
    if (row.t >= start && row.t < start + trace.t_osc) period.push_back(&row);
  if (period.size() < 3) return 0.0;
  double area = 0.0;
  for (std::size_t i = 0; i < period.size(); ++i) {
    const auto* a = period[i];
    const auto* b = period[(i + 1) % period.size()];
    area += a->n_in * b->n_out - b->n_in * a->n_out;
  }
  return 0.5 * std::abs(area);
}

double max_output_near_origin(const Trace& trace, double threshold, int skip_periods) {
  const double start = skip_periods * trace.t_osc;
  double worst = 0.0;
  for (const auto& row : trace.rows)
    if (row.t >= start && row.n_in <= threshold) worst = std::max(worst, row.n_out);
  return worst;
}

}  // namespace qumem::hysteresis
