#pragma once

// Envelope, carrier-modulated coupler flux pulse, the coupling it produces
// through the nonlinear g(phi) map, and a one-sided discrete spectrum.

#include <array>
#include <vector>

#include "pcz/circuit_model.hpp"

namespace pcz {

// Envelope coefficients normalised to lambda2 = 1.
inline constexpr std::array<double, 4> kInitialLambdaRatio = {-0.0760, 1.0000, 0.4222, -0.1636};

struct PulseParams {
  std::array<double, 4> lambda = kInitialLambdaRatio;  // flux quanta
  double amplitude_scale = 0.0;
  double f_carrier = 0.301;  // GHz
  double phase = 0.0;        // rad
  double t_active = 100.0;   // ns
  double t_pad = 3.0;        // ns, before and after
  double sample_dt = 0.01;   // ns

  double t_total() const { return t_active + 2.0 * t_pad; }
  void validate() const;
};

// lambda1 sin(pi t/T) + lambda2 (1 - cos 2 pi t/T) + lambda3 sin(3 pi t/T) + lambda4 (1 - cos 4 pi t/T);
// zero outside the open interval (0, T).
double envelope_shape(const std::array<double, 4>& lambda, double t_active, double t);

// amplitude_scale * shape, with t measured from the start of the active window.
double envelope(const PulseParams& params, double t);

// Extra coupler flux at time t measured from the start of the padded pulse.
double flux_at(const PulseParams& params, double t);

// Mean |A(t)| over the active window; the reported averaged amplitude.
double mean_abs_amplitude(const PulseParams& params);

struct TimeSeries {
  std::vector<double> t;
  std::vector<double> values;

  std::size_t size() const { return t.size(); }
  void validate() const;
};

// Samples t_i = i * sample_dt for i = 0 .. N-1 with N = round(t_total / sample_dt),
// so the record length is exactly t_total and the final (zero) sample is omitted.
TimeSeries flux_pulse(const PulseParams& params);

// g(t) = g_curve(flux_idle + flux(t)); DomainError carries the failing sample index.
TimeSeries coupling_series(const DeviceModel& model, const TimeSeries& flux);

struct SpectralLine {
  double freq_ghz = 0.0;
  // Parseval-normalised: sum of magnitude^2 equals sum of squared samples.
  double magnitude = 0.0;
  // Physical one-sided line amplitude, 2|X_k|/N (|X_0|/N at DC); independent of the sample rate.
  double amplitude = 0.0;
};

// One-sided DFT of a uniformly sampled series (bins k = 0 .. N/2).
std::vector<SpectralLine> spectrum(const TimeSeries& series);

// Largest line within +-half_width_ghz of freq_ghz.
SpectralLine strongest_line_near(const std::vector<SpectralLine>& lines, double freq_ghz, double half_width_ghz);

}  // namespace pcz
