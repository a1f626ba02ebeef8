#include "pcz/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pcz/kernels.hpp"

namespace pcz {
namespace {

constexpr double kMhzToRadPerNs = kTwoPi * 1e-3;

struct Coupled {
  std::size_t a;
  std::size_t b;
  double weight;
};

constexpr std::array<Coupled, 3> kCouplings = {{
    {basis::k10, basis::k01, 1.0},
    {basis::k11, basis::k02, std::numbers::sqrt2},
    {basis::k11, basis::k20, std::numbers::sqrt2},
}};

std::array<double, kSubspaceDim> shift_vector(const QubitShift& s) {
  return {0.0, s.q2_mhz, s.q1_mhz, s.q1_mhz + s.q2_mhz, 2.0 * s.q2_mhz, 2.0 * s.q1_mhz};
}

// Builds A = -i H_I(t) in place; only the coupled entries and the diagonal are touched.
class GeneratorBuilder {
 public:
  GeneratorBuilder(const DeviceModel& model, const PulseParams& pulse, bool include_shift)
      : model_(model), pulse_(pulse), include_shift_(include_shift && model.has_shift_curve()) {
    freqs_ = diag_frequencies(model, model.flux_idle(), false);
  }

  void build(double t, CMatrix& a) const {
    const double phi = model_.flux_idle() + flux_at(pulse_, t);
    const double g = model_.coupling(phi);
    if (!std::isfinite(g)) throw DomainError("evolve: non-finite coupling at t = " + std::to_string(t), 0);
    if (include_shift_) {
      const auto shift = shift_vector(model_.shift_from_idle(phi));
      for (std::size_t k = 0; k < kSubspaceDim; ++k) a(k, k) = cdouble(0.0, -kMhzToRadPerNs * shift[k]);
    }
    for (const Coupled& c : kCouplings) {
      // H_ab = 2 pi g w exp(i 2 pi (f_a - f_b) t); A = -i H.
      const cdouble h = kMhzToRadPerNs * g * c.weight * std::polar(1.0, kTwoPi * (freqs_[c.a] - freqs_[c.b]) * t);
      a(c.a, c.b) = cdouble(h.imag(), -h.real());
      const cdouble hc = std::conj(h);
      a(c.b, c.a) = cdouble(hc.imag(), -hc.real());
    }
  }

  const std::array<double, kSubspaceDim>& idle_freqs() const { return freqs_; }

 private:
  const DeviceModel& model_;
  const PulseParams& pulse_;
  bool include_shift_;
  std::array<double, kSubspaceDim> freqs_;
};

struct RunResult {
  CMatrix u;
  std::vector<SubspaceUnitary> checkpoints;
};

RunResult integrate(const GeneratorBuilder& builder, double t_total, std::size_t steps, int checkpoints) {
  constexpr std::size_t n = kSubspaceDim;
  constexpr std::size_t nn = n * n;
  const double h = t_total / static_cast<double>(steps);
  CMatrix u = CMatrix::identity(n);
  CMatrix a0(n, n), ah(n, n), a1(n, n);
  CMatrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n);

  RunResult out;
  std::vector<std::size_t> snap_steps;
  for (int c = 1; c <= checkpoints; ++c) {
    snap_steps.push_back(static_cast<std::size_t>(std::llround(static_cast<double>(steps) * c / (checkpoints + 1))));
  }
  std::size_t next_snap = 0;

  builder.build(0.0, a0);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * h;
    builder.build(t + 0.5 * h, ah);
    builder.build(t + h, a1);
    kernels::cmatmul(a0.data(), u.data(), k1.data(), n, n, n);
    kernels::cxpay(u.data(), 0.5 * h, k1.data(), tmp.data(), nn);
    kernels::cmatmul(ah.data(), tmp.data(), k2.data(), n, n, n);
    kernels::cxpay(u.data(), 0.5 * h, k2.data(), tmp.data(), nn);
    kernels::cmatmul(ah.data(), tmp.data(), k3.data(), n, n, n);
    kernels::cxpay(u.data(), h, k3.data(), tmp.data(), nn);
    kernels::cmatmul(a1.data(), tmp.data(), k4.data(), n, n, n);
    kernels::caxpy(h / 6.0, k1.data(), u.data(), nn);
    kernels::caxpy(h / 3.0, k2.data(), u.data(), nn);
    kernels::caxpy(h / 3.0, k3.data(), u.data(), nn);
    kernels::caxpy(h / 6.0, k4.data(), u.data(), nn);
    std::swap(a0, a1);
    if (next_snap < snap_steps.size() && s + 1 == snap_steps[next_snap]) {
      out.checkpoints.push_back({u, t + h});
      ++next_snap;
    }
  }
  out.u = std::move(u);
  return out;
}

double fastest_frequency(const std::array<double, kSubspaceDim>& f, const PulseParams& pulse) {
  double detuning = 0.0;
  for (const Coupled& c : kCouplings) detuning = std::max(detuning, std::abs(f[c.a] - f[c.b]));
  // The nonlinear coupling map puts visible weight up to ~4x the carrier.
  return detuning + 4.0 * std::abs(pulse.f_carrier);
}

CMatrix frame_rotation(const std::array<double, kSubspaceDim>& f, double t, double sign) {
  std::array<cdouble, kSubspaceDim> d{};
  for (std::size_t k = 0; k < kSubspaceDim; ++k) d[k] = std::polar(1.0, sign * kTwoPi * f[k] * t);
  return CMatrix::diagonal(d);
}

}  // namespace

std::array<double, kSubspaceDim> diag_frequencies(const DeviceModel& model, double phi, bool include_shift) {
  const SpectralParams& sp = model.spectral();
  double f10 = sp.f01_q1;
  double f01 = sp.f01_q2;
  if (include_shift && model.has_shift_curve()) {
    const QubitShift s = model.shift_from_idle(phi);
    f10 += s.q1_mhz * 1e-3;
    f01 += s.q2_mhz * 1e-3;
  }
  return {0.0, f01, f10, f10 + f01, 2.0 * f01 + sp.eta_q2, 2.0 * f10 + sp.eta_q1};
}

CMatrix interaction_hamiltonian(const std::array<double, kSubspaceDim>& idle_freqs, double g_mhz,
                                const std::array<double, kSubspaceDim>& shift_mhz, double t) {
  CMatrix h(kSubspaceDim, kSubspaceDim);
  for (std::size_t k = 0; k < kSubspaceDim; ++k) h(k, k) = kMhzToRadPerNs * shift_mhz[k];
  for (const Coupled& c : kCouplings) {
    const cdouble v = kMhzToRadPerNs * g_mhz * c.weight *
                      std::polar(1.0, kTwoPi * (idle_freqs[c.a] - idle_freqs[c.b]) * t);
    h(c.a, c.b) = v;
    h(c.b, c.a) = std::conj(v);
  }
  return h;
}

EvolveReport evolve_detailed(const DeviceModel& model, const PulseParams& pulse, const EvolveOptions& options) {
  pulse.validate();
  const GeneratorBuilder builder(model, pulse, options.include_shift);
  const double t_total = pulse.t_total();

  double dt = options.dt;
  if (dt <= 0.0) dt = std::min(0.05, 1.0 / (12.0 * fastest_frequency(builder.idle_freqs(), pulse)));
  auto steps_for = [&](double step) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t_total / step - 1e-9)));
  };

  std::size_t steps = steps_for(dt);
  RunResult coarse = integrate(builder, t_total, steps, options.checkpoints);
  double delta = 0.0;
  int refinements = 0;
  for (;;) {
    RunResult fine = integrate(builder, t_total, 2 * steps, options.checkpoints);
    delta = max_abs_diff(fine.u, coarse.u);
    ++refinements;
    coarse = std::move(fine);
    steps *= 2;
    if (delta < options.tolerance) break;
    if (refinements >= options.max_refinements) {
      throw ConvergenceError("evolve: step halving did not converge after " + std::to_string(refinements) +
                                 " refinements (max entry change " + std::to_string(delta) + ")",
                             delta);
    }
  }

  EvolveReport report;
  report.unitary = lab_frame({std::move(coarse.u), t_total}, model);
  report.dt = t_total / static_cast<double>(steps);
  report.achieved_delta = delta;
  report.refinements = refinements;
  report.checkpoints = std::move(coarse.checkpoints);
  return report;
}

SubspaceUnitary evolve(const DeviceModel& model, const PulseParams& pulse, bool include_shift) {
  EvolveOptions options;
  options.include_shift = include_shift;
  return evolve_detailed(model, pulse, options).unitary;
}

SubspaceUnitary interaction_frame(const SubspaceUnitary& u, const DeviceModel& model) {
  const auto f = diag_frequencies(model, model.flux_idle(), false);
  return {frame_rotation(f, u.t_total, +1.0) * u.matrix, u.t_total};
}

SubspaceUnitary lab_frame(const SubspaceUnitary& u, const DeviceModel& model) {
  const auto f = diag_frequencies(model, model.flux_idle(), false);
  return {frame_rotation(f, u.t_total, -1.0) * u.matrix, u.t_total};
}

}  // namespace pcz
