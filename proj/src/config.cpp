#include "pcz/config.hpp"

#include <fstream>
#include <set>

namespace pcz {
namespace {

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& block) {
  if (!j.is_object()) throw ConfigError(block + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.contains(key)) throw ConfigError(block + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const Json& j, const char* key, T& out, const std::string& block) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(block + "." + key + ": " + e.what());
  }
}

// null means "no decay".
void read_time(const Json& j, const char* key, double& out, const std::string& block) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out = kNoDecay;
    return;
  }
  read(j, key, out, block);
}

CalibrationParam calibration_param_from_name(const std::string& name) {
  if (name == "g_qq") return CalibrationParam::kGqq;
  if (name == "coupling_scale") return CalibrationParam::kCouplingScale;
  if (name == "fc_max") return CalibrationParam::kFcMax;
  if (name == "d_coupler") return CalibrationParam::kDCoupler;
  throw ConfigError("device.calibration_free: unknown parameter '" + name + "'");
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

SpectralParams spectral_from_json(const Json& j, SpectralParams base) {
  const std::string b = "device.spectral";
  check_keys(j, {"f01_q1", "f01_q2", "eta_q1", "eta_q2", "fc_max", "d_coupler", "g_qq", "g_qc1", "g_qc2"}, b);
  read(j, "f01_q1", base.f01_q1, b);
  read(j, "f01_q2", base.f01_q2, b);
  read(j, "eta_q1", base.eta_q1, b);
  read(j, "eta_q2", base.eta_q2, b);
  read(j, "fc_max", base.fc_max, b);
  read(j, "d_coupler", base.d_coupler, b);
  read(j, "g_qq", base.g_qq, b);
  read(j, "g_qc1", base.g_qc1, b);
  read(j, "g_qc2", base.g_qc2, b);
  return base;
}

CircuitParams circuit_from_json(const Json& j, CircuitParams base) {
  const std::string b = "device.circuit";
  check_keys(j, {"c_qubit1", "c_qubit2", "c_coupler", "c_qq", "c_qc1", "c_qc2", "ic_q1a", "ic_q1b", "ic_q2a",
                 "ic_q2b", "ic_ca", "ic_cb"},
             b);
  read(j, "c_qubit1", base.c_qubit1, b);
  read(j, "c_qubit2", base.c_qubit2, b);
  read(j, "c_coupler", base.c_coupler, b);
  read(j, "c_qq", base.c_qq, b);
  read(j, "c_qc1", base.c_qc1, b);
  read(j, "c_qc2", base.c_qc2, b);
  read(j, "ic_q1a", base.ic_q1a, b);
  read(j, "ic_q1b", base.ic_q1b, b);
  read(j, "ic_q2a", base.ic_q2a, b);
  read(j, "ic_q2b", base.ic_q2b, b);
  read(j, "ic_ca", base.ic_ca, b);
  read(j, "ic_cb", base.ic_cb, b);
  return base;
}

DeviceSetup device_from_json(const Json& j) {
  const std::string b = "device";
  check_keys(j, {"mode", "spectral", "circuit", "calibrate", "anchors", "calibration_free", "flux_idle",
                 "idle_bracket"},
             b);
  std::string mode = "spectral";
  read(j, "mode", mode, b);

  SpectralParams spectral;
  if (mode == "circuit") {
    const CircuitParams circuit = circuit_from_json(j.value("circuit", Json::object()));
    circuit.validate();
    spectral = spectral_from_circuit(circuit);
  } else if (mode != "spectral") {
    throw ConfigError("device.mode: expected 'spectral' or 'circuit'");
  }
  if (j.contains("spectral")) spectral = spectral_from_json(j.at("spectral"), spectral);
  spectral.validate();

  std::optional<CalibrationResult> calibration;
  bool calibrate = false;
  read(j, "calibrate", calibrate, b);
  if (calibrate) {
    std::vector<CouplingAnchor> anchors = measured_coupling_anchors();
    if (j.contains("anchors")) {
      anchors.clear();
      for (const Json& a : j.at("anchors")) {
        check_keys(a, {"phi", "g_mhz"}, "device.anchors[]");
        anchors.push_back({a.at("phi").get<double>(), a.at("g_mhz").get<double>()});
      }
    }
    CalibrationOptions opts;
    if (j.contains("calibration_free")) {
      opts.free.clear();
      for (const Json& name : j.at("calibration_free")) opts.free.push_back(calibration_param_from_name(name));
    }
    calibration = calibrate_g_curve(anchors, spectral, opts);
    spectral = calibration->params;
  }

  std::array<double, 2> bracket = {-0.5, 0.0};
  read(j, "idle_bracket", bracket, b);
  double flux_idle = 0.0;
  const Json idle = j.value("flux_idle", Json("auto"));
  const DeviceModel provisional = DeviceModel::from_spectral(spectral, 0.0);
  if (idle.is_string()) {
    if (idle.get<std::string>() != "auto") throw ConfigError("device.flux_idle: expected a number or \"auto\"");
    flux_idle = find_decoupling_flux(provisional, bracket[0], bracket[1]);
  } else {
    read(j, "flux_idle", flux_idle, b);
  }
  return DeviceSetup{spectral, flux_idle, calibration, provisional.with_flux_idle(flux_idle)};
}

PulseParams pulse_from_json(const Json& j, PulseParams base) {
  const std::string b = "pulse";
  check_keys(j, {"lambda", "amplitude_scale", "f_carrier", "phase", "t_active", "t_pad", "sample_dt"}, b);
  read(j, "lambda", base.lambda, b);
  read(j, "amplitude_scale", base.amplitude_scale, b);
  read(j, "f_carrier", base.f_carrier, b);
  read(j, "phase", base.phase, b);
  read(j, "t_active", base.t_active, b);
  read(j, "t_pad", base.t_pad, b);
  read(j, "sample_dt", base.sample_dt, b);
  return base;
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) throw ConfigError("grid: points must be positive");
  if (points == 1) return {lo};
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) out[i] = lo + (hi - lo) * i / (points - 1);
  return out;
}

std::vector<double> grid_from_json(const Json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  check_keys(j, {"min", "max", "points"}, "grid");
  try {
    return linspace(j.at("min").get<double>(), j.at("max").get<double>(), j.at("points").get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

PulseParam pulse_param_from_name(const std::string& name) {
  for (PulseParam p : {PulseParam::kLambda1, PulseParam::kLambda3, PulseParam::kLambda4, PulseParam::kAmplitude,
                       PulseParam::kCarrier}) {
    if (pulse_param_name(p) == name) return p;
  }
  throw ConfigError("optimizer.free_params: unknown parameter '" + name + "'");
}

OptimizerConfig optimizer_from_json(const Json& j, OptimizerConfig base) {
  const std::string b = "optimizer";
  check_keys(j, {"free_params", "max_iters", "simplex_init", "tolerance", "seed", "noise_sigma", "include_shift",
                 "collision_policy", "collision_harmonics"},
             b);
  if (j.contains("free_params")) {
    base.free_params.clear();
    for (const Json& name : j.at("free_params")) base.free_params.push_back(pulse_param_from_name(name));
  }
  read(j, "max_iters", base.max_iters, b);
  read(j, "simplex_init", base.simplex_init, b);
  read(j, "tolerance", base.tolerance, b);
  read(j, "seed", base.seed, b);
  read(j, "noise_sigma", base.noise_sigma, b);
  read(j, "include_shift", base.include_shift, b);
  read(j, "collision_harmonics", base.collision_harmonics, b);
  if (j.contains("collision_policy")) {
    const std::string policy = j.at("collision_policy").get<std::string>();
    if (policy == "reject") {
      base.collision_policy = CollisionPolicy::kReject;
    } else if (policy == "warn") {
      base.collision_policy = CollisionPolicy::kWarn;
    } else {
      throw ConfigError("optimizer.collision_policy: expected 'reject' or 'warn'");
    }
  }
  return base;
}

NoiseModel noise_from_json(const Json& j, NoiseModel base) {
  const std::string b = "noise";
  check_keys(j, {"t1_q1", "t1_q2", "t2_q1", "t2_q2", "t_single", "t_cz", "depolarizing"}, b);
  read_time(j, "t1_q1", base.t1_q1, b);
  read_time(j, "t1_q2", base.t1_q2, b);
  read_time(j, "t2_q1", base.t2_q1, b);
  read_time(j, "t2_q2", base.t2_q2, b);
  read(j, "t_single", base.t_single, b);
  read(j, "t_cz", base.t_cz, b);
  read(j, "depolarizing", base.depolarizing, b);
  base.validate();
  return base;
}

DeltaFamily family_from_json(const Json& j, DeltaFamily base) {
  const std::string b = "sweep";
  check_keys(j, {"f_fixed", "idle_lo", "idle_hi", "deltas_mhz", "t_active"}, b);
  read(j, "f_fixed", base.f_fixed, b);
  read(j, "idle_lo", base.idle_lo, b);
  read(j, "idle_hi", base.idle_hi, b);
  return base;
}

}  // namespace pcz
