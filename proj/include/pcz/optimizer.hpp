#pragma once

// Nelder-Mead simplex search and the CZ pulse optimisation built on it.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "pcz/gate_metrics.hpp"

namespace pcz {

struct NelderMeadOptions {
  int max_iters = 200;
  // Stop when max cost - min cost over the simplex falls below this.
  double tolerance = 1e-6;
  // Per-coordinate displacement of the initial simplex vertices.
  std::vector<double> initial_step;
};

struct TraceEntry {
  int iteration = 0;
  double best_cost = 0.0;
  std::vector<double> params;
};

struct NelderMeadResult {
  std::vector<TraceEntry> trace;  // entry 0 is the initial simplex
  std::vector<double> best_x;
  double best_cost = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

using VectorCost = std::function<double(std::span<const double>)>;

// Reflection 1, expansion 2, contraction 0.5, shrink 0.5. Throws Error when the
// cost returns NaN, naming the offending vector.
NelderMeadResult nelder_mead(const VectorCost& cost, std::span<const double> x0, const NelderMeadOptions& options);

enum class PulseParam { kLambda1, kLambda3, kLambda4, kAmplitude, kCarrier };
std::string_view pulse_param_name(PulseParam p);

struct CostOptions {
  bool include_shift = false;
  // Additive Gaussian noise on every evaluation; 0 keeps the cost deterministic.
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

using PulseCost = std::function<double(const PulseParams&)>;

// 1 - average gate fidelity of the frame-removed propagator (plus optional noise).
PulseCost coherent_cost(const DeviceModel& model, const CostOptions& options = {});

enum class CollisionPolicy { kReject, kWarn };

struct OptimizerConfig {
  std::vector<PulseParam> free_params = {PulseParam::kLambda1, PulseParam::kLambda3, PulseParam::kLambda4,
                                         PulseParam::kAmplitude, PulseParam::kCarrier};
  // amplitude_scale <= 0 asks optimize_cz to seed amplitude and carrier itself.
  PulseParams initial;
  int max_iters = 200;
  // Empty: 5% of each magnitude with floors (see default_simplex_step).
  std::vector<double> simplex_init;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;
  bool include_shift = false;
  CollisionPolicy collision_policy = CollisionPolicy::kReject;
  int collision_harmonics = 2;
};

struct OptimizationTrace {
  std::vector<TraceEntry> entries;
  PulseParams final;
  int evaluations = 0;
  double initial_cost = 0.0;
};

struct OptimizeResult {
  PulseParams pulse;
  GateMetrics metrics;
  OptimizationTrace trace;
  WorkingPointReport working_point;
};

std::vector<double> pack_pulse(const PulseParams& p, std::span<const PulseParam> free);
PulseParams unpack_pulse(const PulseParams& base, std::span<const PulseParam> free, std::span<const double> x);
double default_simplex_step(PulseParam p, double value);

// Linearised estimate of amplitude_scale for a full |11> <-> |20> cycle with the given shape.
double estimate_cycle_amplitude(const DeviceModel& model, const PulseParams& shape);

// Seeds amplitude and carrier from a small swap/phase scan around the
// linearised estimate; returns the pulse with the best (P11, phase) score.
PulseParams seed_pulse(const DeviceModel& model, const PulseParams& shape, bool include_shift);

OptimizeResult optimize_cz(const DeviceModel& model, double t_active, const OptimizerConfig& config);

// Two-qubit family for the detuning sweep: qubit 2 fixed, qubit 1 = qubit 2 + delta.
struct DeltaFamily {
  SpectralParams base;  // coupler parameters and anharmonicities
  double f_fixed = 4.770;  // GHz
  double idle_lo = -0.5;   // decoupling-flux bracket
  double idle_hi = 0.0;
};

DeviceModel delta_family_member(const DeltaFamily& family, double delta_mhz);

struct DeltaSweepPoint {
  double delta_mhz = 0.0;
  double target_mhz = 0.0;
  double coherent_error = 0.0;
  GateMetrics metrics;
  PulseParams pulse;
};

// Re-optimises at every detuning and reports the floor reached. Collisions
// are tolerated (the sweep is meant to expose them).
std::vector<DeltaSweepPoint> delta_sweep(const DeltaFamily& family, std::span<const double> deltas_mhz,
                                         double t_active, const OptimizerConfig& config);

struct PredictedCollision {
  double delta_mhz = 0.0;
  int harmonic = 0;
  Transition transition = Transition::kSwap01_10;
};

// Detunings in [lo, hi] where some harmonic 1..k_max of the drive target hits
// the swap or leakage transition of the family member.
std::vector<PredictedCollision> predict_collisions(const DeltaFamily& family, double lo_mhz, double hi_mhz,
                                                   int k_max);

}  // namespace pcz
