#pragma once

// CZ figures of merit from a frame-removed subspace propagator, and the
// amplitude x detuning scans of the |11> swap population and control phase.

#include <vector>

#include "pcz/dynamics.hpp"

namespace pcz {

struct GateMetrics {
  double control_phase = 0.0;  // rad, wrapped to (-pi, pi]
  double theta_z1 = 0.0;       // virtual-Z corrections, rad
  double theta_z2 = 0.0;
  double leakage = 0.0;     // mean population outside the computational block
  double swap_error = 0.0;  // |<01|U|10>|^2
  double avg_fidelity = 0.0;
  double coherent_error = 0.0;  // 1 - avg_fidelity
};

// Wraps to (-pi, pi].
double wrap_phase(double theta);

// The CZ target diag(1, 1, 1, -1) on the computational block, identity on |02>, |20>.
CMatrix ideal_cz_subspace();

// (Tr(M^dagger M) + |Tr M|^2) / (d (d + 1)) for a d x d block M.
double average_gate_fidelity(const CMatrix& m);

// Throws InvalidArgument when the input is not unitary to 1e-6.
GateMetrics extract_metrics(const SubspaceUnitary& frame_removed);

// |f11 - f20| at idle, GHz.
double resonance_frequency(const DeviceModel& model);

struct ScanResult {
  std::vector<double> amplitude_scale;  // raw grid
  std::vector<double> x;                // averaged amplitude for each grid column
  std::vector<double> y;                // detuning from resonance, MHz
  std::vector<double> values;           // row-major, len(y) rows by len(x) columns

  double at(std::size_t iy, std::size_t ix) const { return values[iy * x.size() + ix]; }
};

struct ScanOptions {
  bool include_shift = false;
  // Carrier reference in GHz; 0 means resonance_frequency(model).
  double resonance_ghz = 0.0;
};

struct SwapPhaseScan {
  ScanResult swap;   // P(|11> -> |11>)
  ScanResult phase;  // control phase
};

// Both maps from one evolution per grid point.
SwapPhaseScan swap_phase_scan(const DeviceModel& model, const PulseParams& base_pulse,
                              const std::vector<double>& amp_grid, const std::vector<double>& detune_grid_mhz,
                              const ScanOptions& options = {});

ScanResult swap_scan(const DeviceModel& model, const PulseParams& base_pulse, const std::vector<double>& amp_grid,
                     const std::vector<double>& detune_grid_mhz, const ScanOptions& options = {});

ScanResult phase_scan(const DeviceModel& model, const PulseParams& base_pulse, const std::vector<double>& amp_grid,
                      const std::vector<double>& detune_grid_mhz, const ScanOptions& options = {});

// Population left in |11> when starting there.
double swap_population(const SubspaceUnitary& frame_removed);

// Q1 Ramsey-style phase difference between Q2 prepared in |1> and in |0>.
double measured_control_phase(const SubspaceUnitary& frame_removed);

}  // namespace pcz
