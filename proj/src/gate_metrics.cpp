#include "pcz/gate_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pcz {
namespace {

constexpr std::array<std::size_t, 4> kComputational = {basis::k00, basis::k01, basis::k10, basis::k11};

void check_grids(const std::vector<double>& amp_grid, const std::vector<double>& detune_grid) {
  if (amp_grid.empty() || detune_grid.empty()) throw InvalidArgument("scan grids must be non-empty");
}

// Relative phase of qubit 1 after preparing (|0> + |1>)/sqrt(2) on it with
// qubit 2 in `q2`.
double q1_phase(const CMatrix& u, std::size_t q2_ground_index, std::size_t q2_excited_index) {
  std::array<cdouble, kSubspaceDim> psi{};
  for (std::size_t r = 0; r < kSubspaceDim; ++r) {
    psi[r] = (u(r, q2_ground_index) + u(r, q2_excited_index)) / std::numbers::sqrt2;
  }
  return std::arg(psi[q2_excited_index] * std::conj(psi[q2_ground_index]));
}

}  // namespace

double wrap_phase(double theta) {
  double w = std::remainder(theta, kTwoPi);  // [-pi, pi]
  if (w <= -kPi) w += kTwoPi;
  return w;
}

CMatrix ideal_cz_subspace() {
  CMatrix cz = CMatrix::identity(kSubspaceDim);
  cz(basis::k11, basis::k11) = -1.0;
  return cz;
}

double average_gate_fidelity(const CMatrix& m) {
  if (!m.square()) throw InvalidArgument("average_gate_fidelity needs a square block");
  const double d = static_cast<double>(m.rows());
  const double tr_mm = (m.adjoint() * m).trace().real();
  return (tr_mm + std::norm(m.trace())) / (d * (d + 1.0));
}

GateMetrics extract_metrics(const SubspaceUnitary& frame_removed) {
  const CMatrix& u = frame_removed.matrix;
  if (u.rows() != kSubspaceDim || u.cols() != kSubspaceDim) throw InvalidArgument("extract_metrics needs a 6x6 propagator");
  const double defect = unitarity_defect(u);
  if (!(defect < 1e-6)) {
    throw InvalidArgument("extract_metrics: propagator is not unitary (defect " + std::to_string(defect) + ")");
  }

  GateMetrics m;
  m.theta_z1 = std::arg(u(basis::k10, basis::k10));
  m.theta_z2 = std::arg(u(basis::k01, basis::k01));
  m.control_phase = wrap_phase(std::arg(u(basis::k11, basis::k11)) - m.theta_z1 - m.theta_z2);

  double leak = 0.0;
  for (std::size_t c : kComputational) leak += std::norm(u(basis::k02, c)) + std::norm(u(basis::k20, c));
  m.leakage = leak / 4.0;
  m.swap_error = std::norm(u(basis::k01, basis::k10));

  // M = CZ^dagger Z^dagger P U P on the computational block.
  const std::array<cdouble, 4> zc = {1.0, std::polar(1.0, -m.theta_z2), std::polar(1.0, -m.theta_z1),
                                     -std::polar(1.0, -(m.theta_z1 + m.theta_z2))};
  CMatrix block(4, 4);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) block(r, c) = zc[r] * u(kComputational[r], kComputational[c]);
  }
  m.avg_fidelity = std::clamp(average_gate_fidelity(block), 0.0, 1.0);
  m.coherent_error = 1.0 - m.avg_fidelity;
  return m;
}

double resonance_frequency(const DeviceModel& model) {
  const auto f = diag_frequencies(model, model.flux_idle(), false);
  return std::abs(f[basis::k11] - f[basis::k20]);
}

double swap_population(const SubspaceUnitary& frame_removed) {
  return std::norm(frame_removed.matrix(basis::k11, basis::k11));
}

double measured_control_phase(const SubspaceUnitary& frame_removed) {
  const CMatrix& u = frame_removed.matrix;
  const double theta_q2_excited = q1_phase(u, basis::k01, basis::k11);
  const double theta_q2_ground = q1_phase(u, basis::k00, basis::k10);
  return wrap_phase(theta_q2_excited - theta_q2_ground);
}

SwapPhaseScan swap_phase_scan(const DeviceModel& model, const PulseParams& base_pulse,
                              const std::vector<double>& amp_grid, const std::vector<double>& detune_grid_mhz,
                              const ScanOptions& options) {
  check_grids(amp_grid, detune_grid_mhz);
  const double f_res = options.resonance_ghz > 0.0 ? options.resonance_ghz : resonance_frequency(model);

  SwapPhaseScan out;
  for (ScanResult* r : {&out.swap, &out.phase}) {
    r->amplitude_scale = amp_grid;
    r->y = detune_grid_mhz;
    r->values.assign(amp_grid.size() * detune_grid_mhz.size(), 0.0);
    for (double a : amp_grid) {
      PulseParams p = base_pulse;
      p.amplitude_scale = a;
      r->x.push_back(mean_abs_amplitude(p));
    }
  }
  for (std::size_t iy = 0; iy < detune_grid_mhz.size(); ++iy) {
    for (std::size_t ix = 0; ix < amp_grid.size(); ++ix) {
      PulseParams p = base_pulse;
      p.amplitude_scale = amp_grid[ix];
      p.f_carrier = f_res + detune_grid_mhz[iy] * 1e-3;
      const SubspaceUnitary u = interaction_frame(evolve(model, p, options.include_shift), model);
      out.swap.values[iy * amp_grid.size() + ix] = std::clamp(swap_population(u), 0.0, 1.0);
      out.phase.values[iy * amp_grid.size() + ix] = measured_control_phase(u);
    }
  }
  return out;
}

ScanResult swap_scan(const DeviceModel& model, const PulseParams& base_pulse, const std::vector<double>& amp_grid,
                     const std::vector<double>& detune_grid_mhz, const ScanOptions& options) {
  return swap_phase_scan(model, base_pulse, amp_grid, detune_grid_mhz, options).swap;
}

ScanResult phase_scan(const DeviceModel& model, const PulseParams& base_pulse, const std::vector<double>& amp_grid,
                      const std::vector<double>& detune_grid_mhz, const ScanOptions& options) {
  return swap_phase_scan(model, base_pulse, amp_grid, detune_grid_mhz, options).phase;
}

}  // namespace pcz
