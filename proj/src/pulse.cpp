#include "pcz/pulse.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

namespace pcz {

void PulseParams::validate() const {
  if (!(t_active > 0.0)) throw InvalidArgument("t_active must be positive");
  if (!(t_pad >= 0.0)) throw InvalidArgument("t_pad must be non-negative");
  if (!(sample_dt > 0.0) || sample_dt > t_active / 1000.0) {
    throw InvalidArgument("sample_dt must be positive and at most t_active/1000");
  }
  for (double l : lambda) {
    if (!std::isfinite(l)) throw InvalidArgument("envelope coefficients must be finite");
  }
  if (!std::isfinite(amplitude_scale) || !std::isfinite(f_carrier) || !std::isfinite(phase)) {
    throw InvalidArgument("pulse amplitude, carrier and phase must be finite");
  }
}

double envelope_shape(const std::array<double, 4>& lambda, double t_active, double t) {
  if (t <= 0.0 || t >= t_active) return 0.0;
  const double x = kPi * t / t_active;
  return lambda[0] * std::sin(x) + lambda[1] * (1.0 - std::cos(2.0 * x)) + lambda[2] * std::sin(3.0 * x) +
         lambda[3] * (1.0 - std::cos(4.0 * x));
}

double envelope(const PulseParams& params, double t) {
  return params.amplitude_scale * envelope_shape(params.lambda, params.t_active, t);
}

double flux_at(const PulseParams& params, double t) {
  const double ta = t - params.t_pad;
  if (ta <= 0.0 || ta >= params.t_active) return 0.0;
  return envelope(params, ta) * std::cos(kTwoPi * params.f_carrier * ta + params.phase);
}

double mean_abs_amplitude(const PulseParams& params) {
  // Composite Simpson on a fixed 2000-interval grid.
  constexpr int kIntervals = 2000;
  const double h = params.t_active / kIntervals;
  double acc = 0.0;
  for (int i = 0; i <= kIntervals; ++i) {
    const double w = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * std::abs(envelope(params, i * h));
  }
  return acc * h / 3.0 / params.t_active;
}

void TimeSeries::validate() const {
  if (t.size() != values.size()) throw InvalidArgument("TimeSeries: t and values differ in length");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw InvalidArgument("TimeSeries: sample times must increase strictly");
  }
}

TimeSeries flux_pulse(const PulseParams& params) {
  params.validate();
  const auto n = static_cast<std::size_t>(std::llround(params.t_total() / params.sample_dt));
  TimeSeries out;
  out.t.resize(n);
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.t[i] = static_cast<double>(i) * params.sample_dt;
    out.values[i] = flux_at(params, out.t[i]);
  }
  return out;
}

TimeSeries coupling_series(const DeviceModel& model, const TimeSeries& flux) {
  flux.validate();
  TimeSeries out;
  out.t = flux.t;
  out.values.resize(flux.size());
  for (std::size_t i = 0; i < flux.size(); ++i) {
    const double phi = model.flux_idle() + flux.values[i];
    try {
      out.values[i] = model.coupling(phi);
    } catch (const DegeneracyError& e) {
      throw DomainError("coupling_series: flux excursion at sample " + std::to_string(i) + " (t = " +
                            std::to_string(flux.t[i]) + " ns): " + e.what(),
                        i);
    }
  }
  return out;
}

namespace {

// FFTW planning is not thread-safe.
std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::vector<SpectralLine> spectrum(const TimeSeries& series) {
  series.validate();
  const std::size_t n = series.size();
  if (n < 2) throw InvalidArgument("spectrum needs at least two samples");
  const double dt = series.t[1] - series.t[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double step = series.t[i] - series.t[i - 1];
    if (std::abs(step - dt) > 1e-6 * dt) {
      throw InvalidArgument("spectrum needs uniform sampling; step " + std::to_string(i) + " is " +
                            std::to_string(step) + " ns vs " + std::to_string(dt) + " ns");
    }
  }

  const std::size_t bins = n / 2 + 1;
  std::vector<double> in(series.values);
  std::vector<fftw_complex> out(bins);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_plan_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_plan_mutex());
    fftw_destroy_plan(plan);
  }

  const double dn = static_cast<double>(n);
  std::vector<SpectralLine> lines(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double mag = std::hypot(out[k][0], out[k][1]);
    const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
    lines[k].freq_ghz = static_cast<double>(k) / (dn * dt);
    lines[k].magnitude = mag / std::sqrt(dn) * (unpaired ? 1.0 : std::sqrt(2.0));
    lines[k].amplitude = mag / dn * (unpaired ? 1.0 : 2.0);
  }
  return lines;
}

SpectralLine strongest_line_near(const std::vector<SpectralLine>& lines, double freq_ghz, double half_width_ghz) {
  SpectralLine best{freq_ghz, 0.0, 0.0};
  for (const SpectralLine& l : lines) {
    if (std::abs(l.freq_ghz - freq_ghz) <= half_width_ghz && l.magnitude > best.magnitude) best = l;
  }
  return best;
}

}  // namespace pcz
