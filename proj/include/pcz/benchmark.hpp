#pragma once

// Cross-entropy and speckle-purity benchmarking on qutrit density matrices,
// decay fits, and the error-budget arithmetic for single-qubit and CZ gates.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pcz/cmatrix.hpp"
#include "pcz/dynamics.hpp"

namespace pcz {

// Times in microseconds (T1, T2*) and nanoseconds (slots). An infinite T1 or T2
// switches that process off.
struct NoiseModel {
  double t1_q1 = 32.2;
  double t1_q2 = 58.5;
  double t2_q1 = 13.5;
  double t2_q2 = 13.3;
  double t_single = 50.0;
  double t_cz = 106.0;
  // Synthetic two-qubit depolarizing error probability applied once per cycle.
  double depolarizing = 0.0;

  static NoiseModel noiseless();
  void validate() const;
};

inline constexpr double kNoDecay = std::numeric_limits<double>::infinity();

enum class XebKind { kCycle, kSingleQ1, kSingleQ2 };

struct XebOptions {
  XebKind kind = XebKind::kCycle;
  std::vector<int> depths;
  int n_circuits = 20;
  std::uint64_t seed = 0;
  // 0 selects exact probabilities; otherwise multinomial sampling with this many shots.
  int shots = 0;
};

struct DecayDataset {
  std::vector<int> depths;
  std::vector<double> alpha;
  std::vector<double> sqrt_purity;
  std::vector<double> leak_pop;
  int n_circuits = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

// The 6-level propagator embedded in two qutrits (index 3 * level_q1 + level_q2);
// levels it does not cover (|12>, |21>, |22>) are left untouched.
CMatrix embed_two_qutrit(const CMatrix& subspace_unitary);

// Removes the single-qubit Z phases measured by extract_metrics, as the
// virtual-Z corrections do in the experiment.
CMatrix with_virtual_z(const SubspaceUnitary& frame_removed);

// `gate` is a 6x6 subspace unitary (used for kCycle only).
DecayDataset xeb_simulate(const CMatrix& gate, const NoiseModel& noise, const XebOptions& options);

struct FitResult {
  double a = 0.0;
  double p = 1.0;
  double b = 0.0;
  double residual = 0.0;  // rms
};

// Least-squares fit of y = a p^m + b with p in (0, 1]. Throws FitError for
// fewer than three points or a constant series.
FitResult fit_decay(const std::vector<int>& m, const std::vector<double>& y);

// As fit_decay, but a constant series is reported as a = 0, p = 1, b = y.
FitResult fit_decay_or_flat(const std::vector<int>& m, const std::vector<double>& y);

// (1 - p)(4^N - 1) / 4^N.
double pauli_error(double p, int n_qubits);
// -a (1 - p)(4^N - 1) / 4^N for a fit of the leaked population.
double leakage_error(const FitResult& leak_fit, int n_qubits);
// 1 - (1 - r_cycle) / ((1 - r_q1)(1 - r_q2)).
double extract_gate_error(double r_cycle, double r_q1, double r_q2);
// 1 - r 2^N / (2^N + 1).
double gate_fidelity(double r_p, int n_qubits);

struct ErrorBudget {
  std::string gate;
  double duration_ns = 0.0;
  int n_qubits = 1;
  std::optional<double> p_xeb;  // absent for the extracted CZ row
  std::optional<double> p_spb;
  double r_p_xeb = 0.0;
  double r_p_spb = 0.0;
  double r_leak = 0.0;
  double r_p_dec = 0.0;
  double r_p_ctrl = 0.0;
  double fidelity = 1.0;
};

struct BudgetRowInputs {
  double p_xeb = 1.0;
  double p_spb = 1.0;
  double r_leak = 0.0;
  double duration_ns = 0.0;
};

struct BudgetFits {
  FitResult xeb;
  FitResult spb;
  FitResult leak;
};

struct BudgetTable {
  ErrorBudget q1;
  ErrorBudget q2;
  ErrorBudget cycle;
  ErrorBudget cz;
};

ErrorBudget budget_row(const std::string& gate, const BudgetRowInputs& in, int n_qubits);

// Single-qubit and cycle rows from decay constants; the CZ row is extracted
// from them with extract_gate_error for each rate.
BudgetTable budget_from_inputs(const BudgetRowInputs& q1, const BudgetRowInputs& q2, const BudgetRowInputs& cycle);

BudgetTable build_budget(const BudgetFits& cycle, const BudgetFits& q1, const BudgetFits& q2,
                         const NoiseModel& slots);

std::string budget_json(const BudgetTable& table);
std::string budget_text(const BudgetTable& table);

struct BudgetExperiment {
  DecayDataset cycle;
  DecayDataset q1;
  DecayDataset q2;
  BudgetFits cycle_fits;
  BudgetFits q1_fits;
  BudgetFits q2_fits;
  BudgetTable table;
};

// Runs the cycle and both single-qubit experiments with shared settings and
// builds the budget.
BudgetExperiment run_budget_experiment(const CMatrix& gate, const NoiseModel& noise,
                                       const std::vector<int>& cycle_depths,
                                       const std::vector<int>& single_depths, int n_circuits, std::uint64_t seed,
                                       int shots = 0);

}  // namespace pcz
