#pragma once

// JSON run configuration: device, pulse, grids, optimizer, noise and XEB blocks.
// Every block is optional and falls back to the library defaults; unknown keys
// are rejected so that typos do not silently run the default experiment.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pcz/benchmark.hpp"
#include "pcz/optimizer.hpp"

namespace pcz {

class ConfigError : public Error {
 public:
  using Error::Error;
};

using Json = nlohmann::json;

Json read_json_file(const std::filesystem::path& path);

struct DeviceSetup {
  SpectralParams spectral;
  double flux_idle = 0.0;
  std::optional<CalibrationResult> calibration;
  DeviceModel model;
};

// {"mode": "spectral"|"circuit", "spectral": {...}, "circuit": {...}, "calibrate": bool,
//  "anchors": [{"phi", "g_mhz"}], "calibration_free": [...], "flux_idle": number|"auto",
//  "idle_bracket": [lo, hi]}
DeviceSetup device_from_json(const Json& j);

SpectralParams spectral_from_json(const Json& j, SpectralParams base = {});
CircuitParams circuit_from_json(const Json& j, CircuitParams base = {});
PulseParams pulse_from_json(const Json& j, PulseParams base = {});

// Either an explicit array or {"min", "max", "points"} (inclusive, evenly spaced).
std::vector<double> grid_from_json(const Json& j);
std::vector<double> linspace(double lo, double hi, int points);

OptimizerConfig optimizer_from_json(const Json& j, OptimizerConfig base = {});
PulseParam pulse_param_from_name(const std::string& name);

// T1/T2 given as null mean no decay.
NoiseModel noise_from_json(const Json& j, NoiseModel base = {});

DeltaFamily family_from_json(const Json& j, DeltaFamily base = {});

}  // namespace pcz
