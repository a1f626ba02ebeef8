#pragma once

#include <cmath>

#include "pcz/circuit_model.hpp"
#include "pcz/pulse.hpp"

namespace pcz::testing {

inline DeviceModel calibrated_device() {
  const SpectralParams sp = calibrate_g_curve(measured_coupling_anchors(), SpectralParams{}).params;
  const DeviceModel m = DeviceModel::from_spectral(sp, 0.0);
  return m.with_flux_idle(find_decoupling_flux(m, -0.5, 0.0));
}

inline PulseParams reference_pulse(double amplitude, double t_active = 100.0) {
  PulseParams p;
  p.t_active = t_active;
  p.sample_dt = std::min(p.sample_dt, t_active / 1000.0);
  p.amplitude_scale = amplitude;
  p.f_carrier = 0.301;
  return p;
}

}  // namespace pcz::testing
