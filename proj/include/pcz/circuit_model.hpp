#pragma once

// Device description for two fixed-frequency-at-idle transmons joined by a
// flux-tunable transmon coupler: junction/charging energies from circuit
// values, coupler spectrum vs flux, and the effective qubit-qubit coupling.
//
// Units: frequencies and energies in GHz (linear, E/h), couplings in MHz,
// flux in units of the flux quantum.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcz/types.hpp"

namespace pcz {

namespace physical {
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElementaryCharge);  // Wb
}  // namespace physical

struct CircuitParams {
  // Capacitances in fF.
  double c_qubit1 = 70.9;
  double c_qubit2 = 70.9;
  double c_coupler = 80.3;
  double c_qq = 0.71;
  double c_qc1 = 13.6;
  double c_qc2 = 13.6;
  // Junction critical currents in nA.
  double ic_q1a = 14.0;
  double ic_q1b = 14.0;
  double ic_q2a = 14.0;
  double ic_q2b = 14.0;
  double ic_ca = 35.0;
  double ic_cb = 70.4;

  void validate() const;
};

struct SpectralParams {
  double f01_q1 = 4.770;  // GHz
  double f01_q2 = 4.839;
  double eta_q1 = -0.232;  // GHz
  double eta_q2 = -0.230;
  double fc_max = 12.0;     // GHz
  double d_coupler = 0.336;
  double g_qq = 25.0;   // MHz
  double g_qc1 = 300.0;  // MHz
  double g_qc2 = 300.0;

  // Coupler frequency at half flux quantum, fc_max * sqrt(d).
  double fc_min() const;
  void validate() const;
};

struct TransmonSpectrum {
  double f01 = 0.0;  // GHz
  double eta = 0.0;  // GHz
  // False when E_J/E_C < 20; the numbers are still returned.
  bool transmon_regime = true;
};

// f01 ~ sqrt(8 E_J E_C) - E_C, eta ~ -E_C.
TransmonSpectrum transmon_spectrum(double ej, double ec);

struct JunctionElement {
  double ej_max = 0.0;  // GHz, parallel junctions summed
  double d = 0.0;       // |I_a - I_b| / (I_a + I_b)
  double ec = 0.0;      // GHz, e^2 / (2 C_sigma h)
};

struct JunctionEnergies {
  JunctionElement qubit1;
  JunctionElement qubit2;
  JunctionElement coupler;
};

// Josephson energy of one junction, I_c Phi0 / (2 pi h), in GHz for I_c in nA.
double josephson_energy_ghz(double ic_na);
// Charging energy e^2 / (2 C h) in GHz for C in fF.
double charging_energy_ghz(double c_ff);

JunctionEnergies junction_energies(const CircuitParams& params);

// Asymmetric SQUID: E_J(phi) = E_Jmax sqrt(cos^2(pi phi) + d^2 sin^2(pi phi)),
// identical to |cos| sqrt(1 + d^2 tan^2) but finite at phi = 1/2.
double ej_of_flux(double ej_max, double d, double phi);

double coupler_frequency(const SpectralParams& spectral, double phi);

// Dispersive tunable-coupler coupling in MHz:
//   g_qq + (g_qc1 g_qc2 / 2) (1/D1 + 1/D2 - 1/S1 - 1/S2),  Di = fi - fc, Si = fi + fc.
// Throws DegeneracyError when |Di| <= kDegeneracyRatio * g_qci.
double effective_coupling(const SpectralParams& spectral, double phi);
inline constexpr double kDegeneracyRatio = 5.0;

struct QubitShift {
  double q1_mhz = 0.0;
  double q2_mhz = 0.0;
};

// Second-order coupler-induced shift of each qubit, g_qci^2 (1/Di - 1/Si), MHz.
QubitShift dispersive_shift(const SpectralParams& spectral, double phi);

// Bare couplings from capacitance ratios, g = (C_c / sqrt(C_a C_b)) sqrt(f_a f_b) / 2,
// evaluated with the coupler at its maximum frequency.
SpectralParams spectral_from_circuit(const CircuitParams& params);

class DeviceModel {
 public:
  using Curve = std::function<double(double)>;
  using ShiftCurve = std::function<QubitShift(double)>;

  // Coupling and shift curves from the dispersive formulas.
  static DeviceModel from_spectral(const SpectralParams& spectral, double flux_idle);
  // Arbitrary coupling curve (synthetic devices in tests, linearised maps, ...).
  static DeviceModel with_curve(const SpectralParams& spectral, double flux_idle, Curve g_curve,
                                std::optional<ShiftCurve> shift_curve = std::nullopt);

  const SpectralParams& spectral() const { return spectral_; }
  double flux_idle() const { return flux_idle_; }
  DeviceModel with_flux_idle(double flux_idle) const;

  // Effective coupling in MHz at absolute coupler flux phi.
  double coupling(double phi) const { return g_curve_(phi); }
  bool has_shift_curve() const { return shift_curve_.has_value(); }
  // Shift relative to the idle point; zero when the model has no shift curve.
  QubitShift shift_from_idle(double phi) const;

 private:
  DeviceModel(SpectralParams spectral, double flux_idle, Curve g_curve, std::optional<ShiftCurve> shift);

  SpectralParams spectral_;
  double flux_idle_ = 0.0;
  Curve g_curve_;
  std::optional<ShiftCurve> shift_curve_;
  QubitShift idle_shift_;
};

struct CouplingAnchor {
  double phi = 0.0;
  double g_mhz = 0.0;
};

enum class CalibrationParam { kGqq, kCouplingScale, kFcMax, kDCoupler };

struct CalibrationOptions {
  // kCouplingScale multiplies g_qc1 and g_qc2 together (their ratio is kept).
  std::vector<CalibrationParam> free = {CalibrationParam::kGqq, CalibrationParam::kCouplingScale,
                                        CalibrationParam::kFcMax};
  int max_iters = 200;
  double max_residual_mhz = 1.0;
};

struct CalibrationResult {
  SpectralParams params;
  double max_residual_mhz = 0.0;
  int iterations = 0;
};

class CalibrationError : public Error {
 public:
  CalibrationError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double best_residual_mhz() const { return residual_; }

 private:
  double residual_;
};

// Levenberg-Marquardt fit of the free spectral parameters to (phi, g) anchors.
CalibrationResult calibrate_g_curve(std::span<const CouplingAnchor> anchors, const SpectralParams& initial,
                                    const CalibrationOptions& options = {});

// The three anchors read off the measured coupling curve: +11 MHz at zero
// flux, -22 MHz at half flux, and the decoupling point at -0.35.
std::vector<CouplingAnchor> measured_coupling_anchors();

// Root of the coupling curve inside [lo, hi]; throws InvalidArgument without a sign change.
double find_decoupling_flux(const DeviceModel& model, double lo, double hi);

enum class Transition { kSwap01_10, kLeak11_02, kLeak11_20 };
std::string_view transition_name(Transition t);

struct CollisionMargin {
  int harmonic = 0;
  Transition transition = Transition::kSwap01_10;
  double transition_mhz = 0.0;
  double margin_mhz = 0.0;  // |k f_target - transition|
  bool warn = false;
};

struct WorkingPointReport {
  double target_mhz = 0.0;
  double delta_mhz = 0.0;       // |f10 - f01|
  double delta_leak_mhz = 0.0;  // non-target |11> <-> |2x> splitting
  std::vector<CollisionMargin> margins;
  bool any_warning = false;
  // A margin below kHardCollisionMhz at k = 0 or 1.
  bool hard_collision = false;
};

inline constexpr double kHardCollisionMhz = 1.0;

// Margins between the drive harmonics k f_target (k = 0..k_max) and the two
// unwanted transitions. `target` is the transition the drive is meant to hit;
// the other |11> <-> |2x> transition is the leakage channel. Warns when a
// margin is below 10x the peak drive coupling.
WorkingPointReport working_point_check(const DeviceModel& model, double f_target_ghz, int k_max,
                                       double drive_peak_mhz,
                                       Transition target = Transition::kLeak11_20);

}  // namespace pcz
