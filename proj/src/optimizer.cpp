#include "pcz/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace pcz {
namespace {

std::string format_vector(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ']';
  return os.str();
}

struct Vertex {
  std::vector<double> x;
  double f = 0.0;
};

}  // namespace

NelderMeadResult nelder_mead(const VectorCost& cost, std::span<const double> x0, const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0) throw InvalidArgument("nelder_mead: empty parameter vector");
  if (options.max_iters < 1) throw InvalidArgument("nelder_mead: max_iters must be at least 1");
  if (options.initial_step.size() != n) throw InvalidArgument("nelder_mead: initial_step has the wrong length");
  for (double s : options.initial_step) {
    if (!(s > 0.0)) throw InvalidArgument("nelder_mead: initial displacements must be positive");
  }

  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    const double f = cost(x);
    ++result.evaluations;
    if (std::isnan(f)) throw Error("nelder_mead: cost is NaN at " + format_vector(x));
    return f;
  };

  std::vector<Vertex> simplex(n + 1);
  simplex[0].x.assign(x0.begin(), x0.end());
  simplex[0].f = eval(simplex[0].x);
  for (std::size_t i = 0; i < n; ++i) {
    simplex[i + 1].x = simplex[0].x;
    simplex[i + 1].x[i] += options.initial_step[i];
    simplex[i + 1].f = eval(simplex[i + 1].x);
  }
  auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  order();
  result.trace.push_back({0, simplex[0].f, simplex[0].x});

  auto blend = [n](const std::vector<double>& a, const std::vector<double>& b, double t) {
    // a + t (b - a)
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };

  int iter = 0;
  while (iter < options.max_iters) {
    if (simplex[n].f - simplex[0].f < options.tolerance) {
      result.converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    Vertex& worst = simplex[n];
    Vertex reflected{blend(centroid, worst.x, -1.0), 0.0};
    reflected.f = eval(reflected.x);

    bool shrink = false;
    if (reflected.f < simplex[0].f) {
      Vertex expanded{blend(centroid, worst.x, -2.0), 0.0};
      expanded.f = eval(expanded.x);
      worst = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
    } else if (reflected.f < simplex[n - 1].f) {
      worst = std::move(reflected);
    } else if (reflected.f < worst.f) {
      Vertex outside{blend(centroid, reflected.x, 0.5), 0.0};
      outside.f = eval(outside.x);
      if (outside.f <= reflected.f) {
        worst = std::move(outside);
      } else {
        shrink = true;
      }
    } else {
      Vertex inside{blend(centroid, worst.x, 0.5), 0.0};
      inside.f = eval(inside.x);
      if (inside.f < worst.f) {
        worst = std::move(inside);
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (std::size_t v = 1; v <= n; ++v) {
        simplex[v].x = blend(simplex[0].x, simplex[v].x, 0.5);
        simplex[v].f = eval(simplex[v].x);
      }
    }
    order();
    ++iter;
    result.trace.push_back({iter, simplex[0].f, simplex[0].x});
  }

  result.iterations = iter;
  result.best_x = simplex[0].x;
  result.best_cost = simplex[0].f;
  return result;
}

std::string_view pulse_param_name(PulseParam p) {
  switch (p) {
    case PulseParam::kLambda1:
      return "lambda1";
    case PulseParam::kLambda3:
      return "lambda3";
    case PulseParam::kLambda4:
      return "lambda4";
    case PulseParam::kAmplitude:
      return "amplitude_scale";
    case PulseParam::kCarrier:
      return "f_carrier";
  }
  return "?";
}

PulseCost coherent_cost(const DeviceModel& model, const CostOptions& options) {
  auto rng = std::make_shared<std::mt19937_64>(options.seed);
  return [model, options, rng](const PulseParams& pulse) {
    const SubspaceUnitary u = interaction_frame(evolve(model, pulse, options.include_shift), model);
    double c = extract_metrics(u).coherent_error;
    if (options.noise_sigma > 0.0) c += std::normal_distribution<double>(0.0, options.noise_sigma)(*rng);
    return c;
  };
}

std::vector<double> pack_pulse(const PulseParams& p, std::span<const PulseParam> free) {
  std::vector<double> x;
  x.reserve(free.size());
  for (PulseParam f : free) {
    switch (f) {
      case PulseParam::kLambda1:
        x.push_back(p.lambda[0]);
        break;
      case PulseParam::kLambda3:
        x.push_back(p.lambda[2]);
        break;
      case PulseParam::kLambda4:
        x.push_back(p.lambda[3]);
        break;
      case PulseParam::kAmplitude:
        x.push_back(p.amplitude_scale);
        break;
      case PulseParam::kCarrier:
        x.push_back(p.f_carrier);
        break;
    }
  }
  return x;
}

PulseParams unpack_pulse(const PulseParams& base, std::span<const PulseParam> free, std::span<const double> x) {
  if (x.size() != free.size()) throw InvalidArgument("unpack_pulse: vector length does not match free_params");
  PulseParams p = base;
  for (std::size_t i = 0; i < free.size(); ++i) {
    switch (free[i]) {
      case PulseParam::kLambda1:
        p.lambda[0] = x[i];
        break;
      case PulseParam::kLambda3:
        p.lambda[2] = x[i];
        break;
      case PulseParam::kLambda4:
        p.lambda[3] = x[i];
        break;
      case PulseParam::kAmplitude:
        p.amplitude_scale = x[i];
        break;
      case PulseParam::kCarrier:
        p.f_carrier = x[i];
        break;
    }
  }
  return p;
}

double default_simplex_step(PulseParam p, double value) {
  switch (p) {
    case PulseParam::kLambda1:
    case PulseParam::kLambda3:
    case PulseParam::kLambda4:
      return std::max(0.05 * std::abs(value), 0.02);
    case PulseParam::kAmplitude:
      return std::max(0.05 * std::abs(value), 1e-4);
    case PulseParam::kCarrier:
      return std::max(0.05 * std::abs(value), 1e-3);
  }
  return 0.0;
}

double estimate_cycle_amplitude(const DeviceModel& model, const PulseParams& shape) {
  constexpr double h = 1e-4;
  const double slope = (model.coupling(model.flux_idle() + h) - model.coupling(model.flux_idle() - h)) / (2.0 * h);
  if (!(std::abs(slope) > 0.0)) throw InvalidArgument("estimate_cycle_amplitude: coupling is flat at idle");
  // Signed area of the unit-amplitude shape (Simpson).
  constexpr int kIntervals = 2000;
  const double step = shape.t_active / kIntervals;
  double area = 0.0;
  for (int i = 0; i <= kIntervals; ++i) {
    const double w = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    area += w * envelope_shape(shape.lambda, shape.t_active, i * step);
  }
  area *= step / 3.0;
  // Full cycle: integral of sqrt(2) * Omega(t) [MHz] * 1e-3 dt [ns] = 1.
  return 1.0 / (std::numbers::sqrt2 * 1e-3 * std::abs(slope) * std::abs(area));
}

PulseParams seed_pulse(const DeviceModel& model, const PulseParams& shape, bool include_shift) {
  const double a0 = estimate_cycle_amplitude(model, shape);
  std::vector<double> amps;
  for (int i = -3; i <= 3; ++i) amps.push_back(a0 * (1.0 + 0.05 * i));
  const std::vector<double> detunings = {-3.0, -1.5, 0.0, 1.5, 3.0};
  ScanOptions scan_opts;
  scan_opts.include_shift = include_shift;
  const SwapPhaseScan scan = swap_phase_scan(model, shape, amps, detunings, scan_opts);

  double best_score = std::numeric_limits<double>::infinity();
  PulseParams best = shape;
  const double f_res = resonance_frequency(model);
  for (std::size_t iy = 0; iy < detunings.size(); ++iy) {
    for (std::size_t ix = 0; ix < amps.size(); ++ix) {
      const double phase_err = wrap_phase(scan.phase.at(iy, ix) - kPi) / kPi;
      const double score = (1.0 - scan.swap.at(iy, ix)) + phase_err * phase_err;
      if (score < best_score) {
        best_score = score;
        best.amplitude_scale = amps[ix];
        best.f_carrier = f_res + detunings[iy] * 1e-3;
      }
    }
  }
  return best;
}

OptimizeResult optimize_cz(const DeviceModel& model, double t_active, const OptimizerConfig& config) {
  if (config.free_params.empty()) throw InvalidArgument("optimize_cz: no free parameters");
  PulseParams start = config.initial;
  start.t_active = t_active;
  start.sample_dt = std::min(start.sample_dt, t_active / 1000.0);
  start.validate();

  OptimizeResult out;
  const double f_res = resonance_frequency(model);
  {
    PulseParams probe = start;
    if (!(probe.amplitude_scale > 0.0)) probe.amplitude_scale = estimate_cycle_amplitude(model, probe);
    constexpr double h = 1e-4;
    const double slope =
        (model.coupling(model.flux_idle() + h) - model.coupling(model.flux_idle() - h)) / (2.0 * h);
    double peak = 0.0;
    for (int i = 0; i <= 200; ++i) peak = std::max(peak, std::abs(envelope(probe, t_active * i / 200.0)));
    out.working_point = working_point_check(model, f_res, config.collision_harmonics, std::abs(slope) * peak);
  }
  if (out.working_point.hard_collision && config.collision_policy == CollisionPolicy::kReject) {
    throw Error("optimize_cz: working point has a hard collision (drive target " +
                std::to_string(out.working_point.target_mhz) + " MHz, delta " +
                std::to_string(out.working_point.delta_mhz) + " MHz, delta_leak " +
                std::to_string(out.working_point.delta_leak_mhz) + " MHz)");
  }

  if (!(start.amplitude_scale > 0.0)) start = seed_pulse(model, start, config.include_shift);

  const PulseCost cost = coherent_cost(model, {config.include_shift, config.noise_sigma, config.seed});
  const std::vector<double> x0 = pack_pulse(start, config.free_params);
  NelderMeadOptions nm;
  nm.max_iters = config.max_iters;
  nm.tolerance = config.tolerance;
  if (config.simplex_init.empty()) {
    for (std::size_t i = 0; i < x0.size(); ++i) nm.initial_step.push_back(default_simplex_step(config.free_params[i], x0[i]));
  } else {
    nm.initial_step = config.simplex_init;
  }
  const NelderMeadResult r = nelder_mead(
      [&](std::span<const double> x) { return cost(unpack_pulse(start, config.free_params, x)); }, x0, nm);

  out.pulse = unpack_pulse(start, config.free_params, r.best_x);
  out.metrics = extract_metrics(interaction_frame(evolve(model, out.pulse, config.include_shift), model));
  out.trace.entries = r.trace;
  out.trace.final = out.pulse;
  out.trace.evaluations = r.evaluations;
  out.trace.initial_cost = r.trace.front().best_cost;
  // The initial simplex contains x0, so trace.front() is at most the seed cost.
  return out;
}

DeviceModel delta_family_member(const DeltaFamily& family, double delta_mhz) {
  if (!std::isfinite(delta_mhz) || std::abs(delta_mhz) < 1e-9) {
    throw InvalidArgument("delta family: delta = 0 is an exact degeneracy");
  }
  SpectralParams sp = family.base;
  sp.f01_q2 = family.f_fixed;
  sp.f01_q1 = family.f_fixed + delta_mhz * 1e-3;
  const DeviceModel provisional = DeviceModel::from_spectral(sp, 0.5 * (family.idle_lo + family.idle_hi));
  return provisional.with_flux_idle(find_decoupling_flux(provisional, family.idle_lo, family.idle_hi));
}

std::vector<DeltaSweepPoint> delta_sweep(const DeltaFamily& family, std::span<const double> deltas_mhz,
                                         double t_active, const OptimizerConfig& config) {
  std::vector<DeltaSweepPoint> out;
  for (double delta : deltas_mhz) {
    if (std::abs(delta) < 1e-9) throw InvalidArgument("delta_sweep: delta = 0 is an exact degeneracy");
    const DeviceModel model = delta_family_member(family, delta);
    OptimizerConfig cfg = config;
    cfg.collision_policy = CollisionPolicy::kWarn;
    cfg.initial.amplitude_scale = 0.0;  // reseed at every detuning
    const OptimizeResult r = optimize_cz(model, t_active, cfg);
    DeltaSweepPoint p;
    p.delta_mhz = delta;
    p.target_mhz = resonance_frequency(model) * 1e3;
    p.coherent_error = r.metrics.coherent_error;
    p.metrics = r.metrics;
    p.pulse = r.pulse;
    out.push_back(p);
  }
  return out;
}

std::vector<PredictedCollision> predict_collisions(const DeltaFamily& family, double lo_mhz, double hi_mhz,
                                                   int k_max) {
  if (!(lo_mhz < hi_mhz)) throw InvalidArgument("predict_collisions: empty range");
  auto signed_margins = [&](double delta) {
    SpectralParams sp = family.base;
    sp.f01_q2 = family.f_fixed;
    sp.f01_q1 = family.f_fixed + delta * 1e-3;
    const DeviceModel m = DeviceModel::with_curve(sp, 0.0, [](double) { return 0.0; });
    const WorkingPointReport rep = working_point_check(m, resonance_frequency(m), k_max, 0.0);
    std::vector<std::pair<CollisionMargin, double>> out;
    for (const CollisionMargin& c : rep.margins) {
      if (c.harmonic >= 1) out.emplace_back(c, c.harmonic * rep.target_mhz - c.transition_mhz);
    }
    return out;
  };

  std::vector<PredictedCollision> found;
  constexpr double kStep = 0.05;
  auto prev = signed_margins(lo_mhz);
  for (double d = lo_mhz + kStep; d <= hi_mhz + 1e-12; d += kStep) {
    auto cur = signed_margins(d);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if ((prev[i].second > 0.0) == (cur[i].second > 0.0)) continue;
      double a = d - kStep;
      double b = d;
      const double fa_sign = prev[i].second;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = signed_margins(mid)[i].second;
        if ((fm > 0.0) == (fa_sign > 0.0)) {
          a = mid;
        } else {
          b = mid;
        }
      }
      found.push_back({0.5 * (a + b), cur[i].first.harmonic, cur[i].first.transition});
    }
    prev = std::move(cur);
  }
  std::sort(found.begin(), found.end(),
            [](const PredictedCollision& x, const PredictedCollision& y) { return x.delta_mhz < y.delta_mhz; });
  return found;
}

}  // namespace pcz
