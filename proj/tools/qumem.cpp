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

// qumem: command-line driver for the memristor, tomography and reservoir
// experiments. Reports are JSON, traces are CSV.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "qumem/hysteresis.hpp"
#include "qumem/io.hpp"
#include "qumem/memristor.hpp"
#include "qumem/mnist.hpp"
#include "qumem/tasks.hpp"
#include "qumem/tomography.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qumem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitCheck = 4;

struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Overlays `user` on `defaults`. Every key must already exist in the defaults
// with a compatible type.
void overlay(json& defaults, const json& user, const std::string& where) {
  if (!user.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = where.empty() ? it.key() : where + "." + it.key();
    if (!defaults.contains(it.key())) throw ConfigError("unknown config key '" + key + "'");
    json& slot = defaults[it.key()];
    const json& v = it.value();
    if (slot.is_object()) {
      overlay(slot, v, key);
      continue;
    }
    const bool ok = (slot.is_number() && v.is_number()) || (slot.is_string() && v.is_string()) ||
                    (slot.is_boolean() && v.is_boolean()) || (slot.is_array() && v.is_array());
    if (!ok) throw ConfigError("config key '" + key + "' has the wrong type");
    slot = v;
  }
}

json load_config(json defaults, const std::string& path) {
  if (path.empty()) return defaults;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json user;
  try {
    in >> user;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  overlay(defaults, user, "");
  return defaults;
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) { io::write_file_atomic(path, j.dump(2) + "\n"); }

std::string tag(double x) {
  std::string s = io::format_number(x);
  for (auto& c : s)
    if (c == '.') c = 'p';
  return s;
}

fs::path data_root() {
  if (const char* env = std::getenv("QUMEM_DATA_DIR")) return env;
  return QUMEM_DATA_DIR;
}

// "exact" maps to 0.
std::int64_t parse_shots(const std::string& text) {
  if (text == "exact") return 0;
  try {
    std::size_t used = 0;
    const long long n = std::stoll(text, &used);
    if (used == text.size() && n > 0) return n;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("--shots must be 'exact' or a positive integer");
}

struct Common {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  bool check = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON config file");
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--seed", c.seed, "Seed for noise, sampling and shuffling");
  app->add_flag("--check", c.check, "Exit with status 4 when acceptance thresholds are missed");
}

// ---- hysteresis -------------------------------------------------------------

json hysteresis_defaults() {
  return {{"seed", 0},
          {"law", "windowed"},
          {"t_osc", 10.0},
          {"n_periods", 3},
          {"dt", 0.0},
          {"ratios", {0.05, 0.2, 0.4, 0.6, 0.8, 1.0}},
          {"f_cut", 4.62},
          {"f_osc", {0.1, 1.0, 4.62, 10.0}},
          {"frozen_r", 0.5},
          {"detection", {{"noise", "exact"}, {"max_rate", 3e4}, {"rc", 0.1}}}};
}

hysteresis::DetectionConfig detection_from(const json& cfg) {
  const json& d = cfg.at("detection");
  hysteresis::DetectionConfig det;
  det.max_rate = get<double>(d, "max_rate");
  det.rc = get<double>(d, "rc");
  const auto noise = get<std::string>(d, "noise");
  if (noise == "exact")
    det.noise = hysteresis::Noise::Exact;
  else if (noise == "poisson")
    det.noise = hysteresis::Noise::Poisson;
  else
    throw ConfigError("detection.noise must be 'exact' or 'poisson'");
  det.seed = get<std::uint64_t>(cfg, "seed");
  return det;
}

json panel_summary(const hysteresis::Trace& t, const std::string& file) {
  return {{"file", file},
          {"rms_nonlinear", hysteresis::rms_deviation(t, hysteresis::nonlinear_limit)},
          {"rms_linear", hysteresis::rms_deviation(t, hysteresis::linear_limit)},
          {"orbit_area", hysteresis::orbit_area(t)},
          {"max_n_out_near_origin", hysteresis::max_output_near_origin(t, 0.02)},
          {"metadata", io::trace_metadata(t)}};
}

int cmd_hysteresis(const Common& c, const std::string& law_flag) {
  json cfg = load_config(hysteresis_defaults(), c.config);
  if (c.seed) cfg["seed"] = *c.seed;
  if (!law_flag.empty()) cfg["law"] = law_flag;

  hysteresis::DriveConfig drive;
  drive.t_osc = get<double>(cfg, "t_osc");
  drive.n_periods = get<int>(cfg, "n_periods");
  drive.dt = get<double>(cfg, "dt");
  drive.validate();
  const auto det = detection_from(cfg);
  hysteresis::DetectionConfig exact = det;
  exact.noise = hysteresis::Noise::Exact;
  const std::string law = get<std::string>(cfg, "law");

  fs::create_directories(c.out);
  json panels = json::array();
  json summary = {{"command", "hysteresis"}, {"config", cfg}};
  std::vector<std::string> misses;

  auto emit = [&](const hysteresis::Trace& t, const std::string& file) {
    io::write_file_atomic(fs::path(c.out) / file, io::trace_csv(t));
    return panel_summary(t, file);
  };

  if (law == "windowed") {
    const auto ratios = get<std::vector<double>>(cfg, "ratios");
    if (ratios.empty()) throw ConfigError("ratios must not be empty");
    for (double ratio : ratios) {
      if (!(ratio > 0.0)) throw ConfigError("ratios must be positive");
      const auto mem = memristor::MemristorState::windowed(ratio * drive.t_osc);
      const auto t = hysteresis::run_closed_loop(drive, mem, det);
      json p = emit(t, "trace_ratio_" + tag(ratio) + ".csv");
      p["ratio"] = ratio;
      p["regime"] = hysteresis::regime_name(hysteresis::classify_regime(ratio * drive.t_osc, drive.t_osc));
      if (det.noise == hysteresis::Noise::Poisson) {
        const auto clean = hysteresis::run_closed_loop(drive, mem, exact);
        p["rms_nonlinear_noiseless"] = hysteresis::rms_deviation(clean, hysteresis::nonlinear_limit);
        p["rms_linear_noiseless"] = hysteresis::rms_deviation(clean, hysteresis::linear_limit);
      }
      panels.push_back(p);
    }
    // LF is judged on the shortest window, HF on the longest.
    auto lo = panels.front(), hi = panels.front();
    for (const auto& p : panels) {
      if (p["ratio"].get<double>() < lo["ratio"].get<double>()) lo = p;
      if (p["ratio"].get<double>() > hi["ratio"].get<double>()) hi = p;
    }
    summary["lf_rms"] = lo["rms_nonlinear"];
    summary["lf_ratio"] = lo["ratio"];
    summary["hf_rms"] = hi["rms_linear"];
    summary["hf_ratio"] = hi["ratio"];
    if (c.check) {
      const bool noisy = det.noise == hysteresis::Noise::Poisson;
      const double lf_bound = noisy ? 3.0 * std::max(lo["rms_nonlinear_noiseless"].get<double>(), 0.02) : 0.02;
      const double hf_bound = noisy ? 3.0 * std::max(hi["rms_linear_noiseless"].get<double>(), 0.02) : 0.02;
      if (lo["rms_nonlinear"].get<double>() > lf_bound) misses.push_back("LF RMS above " + io::format_number(lf_bound));
      if (hi["rms_linear"].get<double>() > hf_bound) misses.push_back("HF RMS above " + io::format_number(hf_bound));
      if (!noisy)
        for (const auto& p : panels)
          if (p["max_n_out_near_origin"].get<double>() > 0.02)
            misses.push_back("orbit at ratio " + io::format_number(p["ratio"]) + " not pinched");
    }
  } else if (law == "lowpass") {
    const double f_cut = get<double>(cfg, "f_cut");
    const auto freqs = get<std::vector<double>>(cfg, "f_osc");
    if (freqs.empty()) throw ConfigError("f_osc must not be empty");
    for (double f : freqs) {
      if (!(f > 0.0)) throw ConfigError("f_osc values must be positive");
      hysteresis::DriveConfig d = drive;
      d.t_osc = 1.0 / f;
      d.validate();
      const auto t = hysteresis::run_lpf_loop(d, f_cut, det);
      json p = emit(t, "trace_fosc_" + tag(f) + ".csv");
      p["f_osc"] = f;
      panels.push_back(p);
      if (c.check && det.noise == hysteresis::Noise::Exact && p["max_n_out_near_origin"].get<double>() > 0.02)
        misses.push_back("orbit at f_osc " + io::format_number(f) + " not pinched");
    }
    auto slow = panels.front();
    for (const auto& p : panels)
      if (p["f_osc"].get<double>() < slow["f_osc"].get<double>()) slow = p;
    summary["lf_rms"] = slow["rms_nonlinear"];
    summary["lf_f_osc"] = slow["f_osc"];
    if (c.check && det.noise == hysteresis::Noise::Exact && slow["rms_nonlinear"].get<double>() > 0.03)
      misses.push_back("slowest-drive RMS above 0.03");
  } else if (law == "frozen") {
    const auto t = hysteresis::run_closed_loop(drive, memristor::MemristorState::frozen(get<double>(cfg, "frozen_r")), det);
    panels.push_back(emit(t, "trace_frozen.csv"));
  } else {
    throw ConfigError("law must be windowed, lowpass or frozen");
  }

  summary["panels"] = panels;
  summary["check_failures"] = misses;
  write_json(fs::path(c.out) / "summary.json", summary);
  std::cout << "hysteresis: " << panels.size() << " traces written to " << c.out << "\n";
  if (!misses.empty()) throw CheckFailed(misses.front());
  return 0;
}

// ---- purity-map ---------------------------------------------------------------

int cmd_purity_map(const Common& c) {
  json cfg = load_config({{"points", 101}}, c.config);
  const int n = get<int>(cfg, "points");
  if (n < 2) throw ConfigError("points must be at least 2");
  std::ostringstream csv;
  csv << "beta2,R,purity\n";
  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double b2 = i / double(n - 1), r = j / double(n - 1);
      const double p = memristor::purity_closed_form(b2, r);
      asym = std::max(asym, std::abs(p - memristor::purity_closed_form(b2, 1.0 - r)));
      csv << io::format_number(b2) << ',' << io::format_number(r) << ',' << io::format_number(p) << '\n';
    }
  fs::create_directories(c.out);
  io::write_file_atomic(fs::path(c.out) / "purity_map.csv", csv.str());
  const double corner = memristor::purity_closed_form(0.0, 0.0), mid = memristor::purity_closed_form(1.0, 0.5);
  write_json(fs::path(c.out) / "purity_map.json", {{"command", "purity-map"},
                                                    {"config", cfg},
                                                    {"file", "purity_map.csv"},
                                                    {"purity_at_0_0", corner},
                                                    {"purity_at_1_0.5", mid},
                                                    {"max_asymmetry", asym}});
  std::cout << "purity-map: " << n * n << " points written\n";
  if (c.check && (std::abs(corner - 1.0) > 1e-12 || std::abs(mid - 0.5) > 1e-12 || asym > 1e-12))
    throw CheckFailed("purity map landmarks");
  return 0;
}

// ---- rc ---------------------------------------------------------------------

json rc_defaults(const std::string& task) {
  json j = {{"seed", 0},
            {"encoding", "quantum"},
            {"feedback", true},
            {"shots", 0},
            {"reservoir", {{"modes", 9}, {"photons", 3}, {"mesh_seed", 1}, {"window", task == "mnist" ? 12 : 100}}},
            {"readout", {{"hidden", 10}, {"init_seed", 7}, {"epochs", 15}, {"lr", 0.05}, {"batch", 32}}}};
  if (task == "mnist")
    j["mnist"] = {{"n_train", 1000}, {"n_test", 1000}, {"digits", {0, 3, 8}}};
  else
    j["entanglement"] = {{"n_train_per_class", 500}, {"n_test_per_class", 500}, {"d_loc", 12}, {"copies", 100},
                         {"data_seed", 11}};
  return j;
}

reservoir::ReservoirConfig reservoir_from(const json& cfg) {
  const json& r = cfg.at("reservoir");
  reservoir::ReservoirConfig rc;
  rc.modes = get<int>(r, "modes");
  rc.photons = get<int>(r, "photons");
  rc.mesh_seed = get<std::uint64_t>(r, "mesh_seed");
  rc.window = get<int>(r, "window");
  rc.feedback = get<bool>(cfg, "feedback");
  rc.shots = get<std::int64_t>(cfg, "shots");
  rc.shot_seed = get<std::uint64_t>(cfg, "seed");
  rc.validate();
  return rc;
}

tasks::ReadoutConfig readout_from(const json& cfg) {
  const json& r = cfg.at("readout");
  tasks::ReadoutConfig rc;
  rc.hidden = get<int>(r, "hidden");
  rc.init_seed = get<std::uint64_t>(r, "init_seed");
  rc.train.epochs = get<int>(r, "epochs");
  rc.train.lr = get<double>(r, "lr");
  rc.train.batch = get<int>(r, "batch");
  rc.train.seed = get<std::uint64_t>(cfg, "seed");
  if (rc.hidden < 1 || rc.train.epochs < 1 || rc.train.batch < 1 || !(rc.train.lr > 0.0))
    throw ConfigError("readout settings must be positive");
  return rc;
}

int cmd_rc(const Common& c, const std::string& task, const std::string& encoding, const std::string& feedback,
           const std::string& shots) {
  if (task != "mnist" && task != "entanglement") throw ConfigError("task must be mnist or entanglement");
  json cfg = load_config(rc_defaults(task), c.config);
  if (c.seed) cfg["seed"] = *c.seed;
  if (!encoding.empty()) cfg["encoding"] = encoding;
  if (!feedback.empty()) cfg["feedback"] = feedback == "on";
  if (!shots.empty()) cfg["shots"] = parse_shots(shots);

  const auto enc_name = get<std::string>(cfg, "encoding");
  if (enc_name != "quantum" && enc_name != "coherent") throw ConfigError("encoding must be quantum or coherent");
  const auto enc = enc_name == "quantum" ? reservoir::Encoding::Quantum : reservoir::Encoding::CoherentMixture;
  const bool fb = get<bool>(cfg, "feedback");

  json extra;
  const tasks::TaskResult result = [&] {
    if (task == "mnist") {
      const json& m = cfg.at("mnist");
      auto req = mnist::default_request(data_root());
      req.n_train = get<std::size_t>(m, "n_train");
      req.n_test = get<std::size_t>(m, "n_test");
      req.digits = get<std::vector<int>>(m, "digits");
      const auto data = mnist::load_mnist(req);
      tasks::MnistTaskConfig tc;
      tc.reservoir = reservoir_from(cfg);
      tc.encoding = enc;
      tc.readout = readout_from(cfg);
      extra = {{"images", req.images.string()}, {"labels", req.labels.string()}};
      return tasks::run_mnist_task(data, tc);
    }
    if (enc != reservoir::Encoding::Quantum) throw ConfigError("the entanglement task uses quantum states directly");
    const json& e = cfg.at("entanglement");
    tasks::EntanglementTaskConfig tc;
    tc.reservoir = reservoir_from(cfg);
    tc.readout = readout_from(cfg);
    tc.n_train_per_class = get<int>(e, "n_train_per_class");
    tc.n_test_per_class = get<int>(e, "n_test_per_class");
    tc.d_loc = get<int>(e, "d_loc");
    tc.copies = get<int>(e, "copies");
    tc.data_seed = get<std::uint64_t>(e, "data_seed");
    return tasks::run_entanglement_task(tc);
  }();

  fs::create_directories(c.out);
  json metrics = {{"command", "rc"},
                  {"task", task},
                  {"config", cfg},
                  {"train_accuracy", result.train_accuracy},
                  {"test_accuracy", result.test_accuracy},
                  {"epoch_loss", result.epoch_loss},
                  {"fallback_inputs", result.fallback_inputs}};
  if (!extra.is_null()) metrics["dataset"] = extra;

  std::vector<std::string> misses;
  if (c.check) {
    const double a = result.test_accuracy;
    if (task == "entanglement") {
      if (a < 0.90) misses.push_back("entanglement accuracy below 0.90");
    } else if (!fb) {
      if (a < 0.25 || a > 0.45) misses.push_back("feedback-off accuracy outside [0.25, 0.45]");
    } else if (enc == reservoir::Encoding::Quantum) {
      if (a < 0.90) misses.push_back("quantum accuracy below 0.90");
    } else if (a < 0.55 || a > 0.85) {
      misses.push_back("coherent accuracy outside [0.55, 0.85]");
    }
  }
  metrics["check_failures"] = misses;
  write_json(fs::path(c.out) / ("rc_" + task + "_metrics.json"), metrics);
  write_json(fs::path(c.out) / ("rc_" + task + "_checkpoint.json"),
             {{"config", cfg},
              {"input_scale", result.model.input_scale()},
              {"w1", std::vector<double>(result.model.w1().data(), result.model.w1().data() + result.model.w1().size())},
              {"w1_shape", {result.model.w1().rows(), result.model.w1().cols()}},
              {"w2", std::vector<double>(result.model.w2().data(), result.model.w2().data() + result.model.w2().size())},
              {"w2_shape", {result.model.w2().rows(), result.model.w2().cols()}},
              {"storage", "column-major"}});
  std::printf("rc %s: train %.4f test %.4f\n", task.c_str(), result.train_accuracy, result.test_accuracy);
  if (!misses.empty()) throw CheckFailed(misses.front());
  return 0;
}

// ---- tomography ---------------------------------------------------------------

int cmd_tomography(const Common& c, const std::string& shots_flag) {
  json cfg = load_config({{"seed", 0}, {"shots", 0}, {"phi_global", 5.6}}, c.config);
  if (c.seed) cfg["seed"] = *c.seed;
  if (!shots_flag.empty()) cfg["shots"] = parse_shots(shots_flag);
  const auto shots = get<std::int64_t>(cfg, "shots");
  if (shots < 0) throw ConfigError("shots must not be negative");
  const auto seed = get<std::uint64_t>(cfg, "seed");
  const double phi = get<double>(cfg, "phi_global");

  const auto settings = tomography::default_settings();
  const auto fixtures = tomography::table_fixtures(phi);
  json states = json::array();
  std::vector<tomography::CoherenceSample> samples;
  double min_fid = 1.0, mean_fid = 0.0;
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const auto& f = fixtures[i];
    const auto counts = tomography::simulate_counts(f.rho_theory, settings, shots, seed + i);
    auto rep = tomography::mle_reconstruct(counts, settings, tomography::p00_estimate(counts));
    tomography::score(rep, f.rho_theory);
    min_fid = std::min(min_fid, rep.fidelity);
    mean_fid += rep.fidelity / static_cast<double>(fixtures.size());
    if (f.beta2 > 0.0 && f.beta2 < 1.0 && f.reflectivity < 1.0)
      samples.push_back({f.beta2, f.reflectivity, rep.rho(1, 2)});
    states.push_back({{"index", i + 1},
                      {"beta2", f.beta2},
                      {"reflectivity", f.reflectivity},
                      {"fidelity", rep.fidelity},
                      {"purity", rep.purity},
                      {"purity_theory", memristor::purity_dual_rail(f.beta2, f.reflectivity)},
                      {"iterations", rep.iterations},
                      {"rho", io::matrix_json(rep.rho)},
                      {"rho_theory", io::matrix_json(f.rho_theory)}});
  }
  const double phi_fit = tomography::fit_global_phase(samples);
  json report = {{"command", "tomography"},
                 {"config", cfg},
                 {"states", states},
                 {"min_fidelity", min_fid},
                 {"mean_fidelity", mean_fid},
                 {"phi_global_in", phi},
                 {"phi_global_fit", phi_fit}};
  std::vector<std::string> misses;
  if (c.check && shots == 0 && min_fid < 0.999) misses.push_back("exact round-trip fidelity below 0.999");
  report["check_failures"] = misses;
  fs::create_directories(c.out);
  write_json(fs::path(c.out) / "tomography.json", report);
  std::printf("tomography: min fidelity %.6f, mean %.6f, phi_global fit %.4f\n", min_fid, mean_fid, phi_fit);
  if (!misses.empty()) throw CheckFailed(misses.front());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum memristor simulator"};
  app.require_subcommand(1);

  Common common;
  std::string law, encoding, feedback, shots, task;

  auto* hyst = app.add_subcommand("hysteresis", "Closed-loop memristor traces");
  add_common(hyst, common);
  hyst->add_option("--law", law, "Memristor law")->check(CLI::IsMember({"windowed", "lowpass", "frozen"}));

  auto* pmap = app.add_subcommand("purity-map", "Output purity over (|beta|^2, R)");
  add_common(pmap, common);

  auto* rc = app.add_subcommand("rc", "Reservoir computing task");
  add_common(rc, common);
  rc->add_option("task", task, "mnist or entanglement")->required()->check(CLI::IsMember({"mnist", "entanglement"}));
  rc->add_option("--encoding", encoding)->check(CLI::IsMember({"quantum", "coherent"}));
  rc->add_option("--feedback", feedback)->check(CLI::IsMember({"on", "off"}));
  rc->add_option("--shots", shots, "exact or a positive integer");

  auto* tomo = app.add_subcommand("tomography", "Round trip over the 16 reference states");
  add_common(tomo, common);
  tomo->add_option("--shots", shots, "exact or a positive integer");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*hyst) return cmd_hysteresis(common, law);
    if (*pmap) return cmd_purity_map(common);
    if (*rc) return cmd_rc(common, task, encoding, feedback, shots);
    if (*tomo) return cmd_tomography(common, shots);
  } catch (const CheckFailed& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kExitCheck;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
