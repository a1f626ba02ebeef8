#include <gtest/gtest.h>

#include <cmath>

#include "pcz/circuit_model.hpp"

namespace pcz {
namespace {

SpectralParams calibrated() {
  static const SpectralParams sp = calibrate_g_curve(measured_coupling_anchors(), SpectralParams{}).params;
  return sp;
}

TEST(TransmonSpectrum, ClosedForm) {
  const TransmonSpectrum s = transmon_spectrum(13.905, 0.2273);
  EXPECT_NEAR(s.f01, std::sqrt(8.0 * 13.905 * 0.2273) - 0.2273, 1e-12);
  EXPECT_NEAR(s.f01, 4.801, 1e-3);
  EXPECT_DOUBLE_EQ(s.eta, -0.2273);
  EXPECT_TRUE(s.transmon_regime);
}

TEST(TransmonSpectrum, SmallChargingEnergyLimit) {
  const TransmonSpectrum s = transmon_spectrum(10.0, 1e-8);
  EXPECT_LT(s.f01, 1e-3);
  EXPECT_GT(s.eta, -1e-7);
}

TEST(TransmonSpectrum, RegimeViolationIsFlaggedNotThrown) {
  const TransmonSpectrum s = transmon_spectrum(2.0, 0.5);
  EXPECT_FALSE(s.transmon_regime);
  EXPECT_GT(s.f01, 0.0);
}

TEST(TransmonSpectrum, MonotoneInJosephsonEnergy) {
  double prev = 0.0;
  for (double ej = 5.0; ej < 60.0; ej += 0.5) {
    const double f = transmon_spectrum(ej, 0.2).f01;
    EXPECT_GT(f, prev);
    prev = f;
  }
  EXPECT_THROW(transmon_spectrum(-1.0, 0.2), InvalidArgument);
}

TEST(JunctionEnergies, ReferenceCircuit) {
  // I_c Phi0 / (2 pi h) = I_c / (4 pi e), evaluated from the defining constants.
  const double e = 1.602176634e-19;
  const double ej_single = 14.0e-9 / (4.0 * kPi * e) * 1e-9;
  EXPECT_NEAR(josephson_energy_ghz(14.0), ej_single, 1e-12);

  const JunctionEnergies je = junction_energies(CircuitParams{});
  EXPECT_NEAR(je.qubit1.ej_max, 2.0 * ej_single, 1e-12);
  EXPECT_NEAR(je.qubit1.ej_max, 13.905, 5e-3);
  EXPECT_DOUBLE_EQ(je.qubit1.d, 0.0);
  EXPECT_NEAR(je.qubit1.ec, 0.2273, 2e-4);
  const double h = 6.62607015e-34;
  EXPECT_NEAR(je.qubit1.ec, e * e / (2.0 * 85.21e-15 * h) * 1e-9, 1e-12);
  EXPECT_NEAR(je.coupler.d, (70.4 - 35.0) / 105.4, 1e-12);
}

TEST(JunctionEnergies, RejectsNonPositiveValues) {
  CircuitParams p;
  p.c_qc1 = 0.0;
  EXPECT_THROW(junction_energies(p), InvalidArgument);
}

TEST(SpectralFromCircuit, QubitMatchesTableOne) {
  const SpectralParams sp = spectral_from_circuit(CircuitParams{});
  EXPECT_NEAR(sp.f01_q1, 4.770, 0.150);
  EXPECT_NEAR(sp.eta_q1, -0.232, 0.015);
  EXPECT_GT(sp.g_qc1, 0.0);
}

TEST(EjOfFlux, BoundsSymmetryAndPeriod) {
  const double ej = 52.3;
  const double d = 0.336;
  EXPECT_DOUBLE_EQ(ej_of_flux(ej, d, 0.0), ej);
  EXPECT_NEAR(ej_of_flux(ej, d, 0.5), d * ej, 1e-12);
  // |cos| sqrt(1 + d^2 tan^2) at a quarter flux quantum.
  const double c = std::cos(kPi * 0.25);
  const double t = std::tan(kPi * 0.25);
  EXPECT_NEAR(ej_of_flux(ej, d, 0.25), ej * std::abs(c) * std::sqrt(1.0 + d * d * t * t), 1e-12);
  for (double phi = -1.5; phi <= 1.5; phi += 0.0137) {
    const double v = ej_of_flux(ej, d, phi);
    EXPECT_GE(v, d * ej - 1e-12);
    EXPECT_LE(v, ej + 1e-12);
    EXPECT_NEAR(v, ej_of_flux(ej, d, -phi), 1e-10);
    EXPECT_NEAR(v, ej_of_flux(ej, d, phi + 1.0), 1e-10);
  }
}

TEST(EffectiveCoupling, MatchesDispersiveFormula) {
  SpectralParams sp;
  for (double phi : {-0.4, -0.1, 0.0, 0.2, 0.5}) {
    const double fc = sp.fc_max * std::pow(std::pow(std::cos(kPi * phi), 2) +
                                               sp.d_coupler * sp.d_coupler * std::pow(std::sin(kPi * phi), 2),
                                           0.25);
    const double expected = sp.g_qq + sp.g_qc1 * sp.g_qc2 / 2.0 *
                                          (1.0 / (sp.f01_q1 - fc) + 1.0 / (sp.f01_q2 - fc) -
                                           1.0 / (sp.f01_q1 + fc) - 1.0 / (sp.f01_q2 + fc)) / 1000.0;
    EXPECT_NEAR(effective_coupling(sp, phi), expected, 1e-9) << phi;
  }
}

TEST(EffectiveCoupling, DecoupledCouplerLeavesDirectTerm) {
  SpectralParams sp;
  sp.g_qc1 = sp.g_qc2 = 0.0;
  for (double phi = -0.5; phi <= 0.5; phi += 0.05) EXPECT_EQ(effective_coupling(sp, phi), sp.g_qq);
}

TEST(EffectiveCoupling, DegeneracyNamesFrequencies) {
  SpectralParams sp;
  sp.fc_max = 9.0;  // fc_min ~ 5.2 GHz, within 5 g_qc of the qubits
  try {
    effective_coupling(sp, 0.5);
    FAIL() << "expected DegeneracyError";
  } catch (const DegeneracyError& e) {
    EXPECT_NE(std::string(e.what()).find("4.77"), std::string::npos) << e.what();
  }
  EXPECT_NO_THROW(effective_coupling(sp, 0.0));
}

TEST(SpectralParams, CouplerMustStayAboveQubits) {
  SpectralParams sp;
  sp.fc_max = 7.0;
  EXPECT_THROW(sp.validate(), InvalidArgument);
  sp = SpectralParams{};
  sp.d_coupler = 1.0;
  EXPECT_THROW(sp.validate(), InvalidArgument);
}

TEST(CalibrateGCurve, MeasuredAnchors) {
  const SpectralParams sp = calibrated();
  EXPECT_NEAR(effective_coupling(sp, 0.0), 11.0, 1.0);
  EXPECT_NEAR(effective_coupling(sp, 0.5), -22.0, 1.0);
  EXPECT_NEAR(effective_coupling(sp, -0.35), 0.0, 0.5);
  // Coupler stays far above the qubits, as designed.
  EXPECT_GT(sp.fc_min() - sp.f01_q2, 1.5);
}

TEST(CalibrateGCurve, SelfGeneratedAnchorsAreReproduced) {
  SpectralParams truth;
  truth.g_qq = 21.0;
  truth.g_qc1 = truth.g_qc2 = 250.0;
  truth.fc_max = 11.0;
  std::vector<CouplingAnchor> anchors;
  for (double phi : {0.0, 0.2, 0.5, -0.3}) anchors.push_back({phi, effective_coupling(truth, phi)});
  const CalibrationResult r = calibrate_g_curve(anchors, SpectralParams{});
  EXPECT_LT(r.max_residual_mhz, 1e-2);
  for (const CouplingAnchor& a : anchors) EXPECT_NEAR(effective_coupling(r.params, a.phi), a.g_mhz, 1e-2);
  EXPECT_NEAR(r.params.g_qq, truth.g_qq, 1e-3);
  EXPECT_NEAR(r.params.fc_max, truth.fc_max, 1e-5);
  EXPECT_NEAR(r.params.g_qc1, truth.g_qc1, 1e-3);
}

TEST(CalibrateGCurve, SingleAnchorDirectCoupling) {
  SpectralParams sp;
  sp.g_qc1 = sp.g_qc2 = 0.0;
  CalibrationOptions o;
  o.free = {CalibrationParam::kGqq};
  const std::vector<CouplingAnchor> one = {{0.2, 7.5}};
  EXPECT_NEAR(calibrate_g_curve(one, sp, o).params.g_qq, 7.5, 1e-6);
}

TEST(CalibrateGCurve, Errors) {
  const std::vector<CouplingAnchor> two = {{0.0, 11.0}, {0.5, -22.0}};
  EXPECT_THROW(calibrate_g_curve(two, SpectralParams{}), InvalidArgument);

  // Unreachable anchors: only g_qq free cannot make the curve cross zero twice as far apart.
  CalibrationOptions o;
  o.free = {CalibrationParam::kGqq};
  const std::vector<CouplingAnchor> bad = {{0.0, 100.0}, {0.5, -100.0}};
  try {
    calibrate_g_curve(bad, SpectralParams{}, o);
    FAIL() << "expected CalibrationError";
  } catch (const CalibrationError& e) {
    EXPECT_GT(e.best_residual_mhz(), 1.0);
  }
}

TEST(FindDecouplingFlux, CalibratedDevice) {
  const DeviceModel m = DeviceModel::from_spectral(calibrated(), 0.0);
  const double phi = find_decoupling_flux(m, -0.5, 0.0);
  EXPECT_NEAR(phi, -0.35, 0.03);
  EXPECT_LT(std::abs(m.coupling(phi)), 1e-3);
  EXPECT_GT(phi, -0.5);
  EXPECT_LT(phi, 0.0);
}

TEST(FindDecouplingFlux, SyntheticCurves) {
  const SpectralParams sp;
  EXPECT_NEAR(find_decoupling_flux(DeviceModel::with_curve(sp, 0.0, [](double p) { return p; }), -0.4, 0.3), 0.0,
              1e-12);
  // Closed form with a root at 0.123; the oracle is a plain bisection.
  auto curve = [](double p) { return std::sinh(3.0 * (p - 0.123)) + 0.2 * (p - 0.123); };
  double a = -0.2;
  double b = 0.4;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (a + b);
    ((curve(mid) > 0.0) == (curve(b) > 0.0) ? b : a) = mid;
  }
  const double phi = find_decoupling_flux(DeviceModel::with_curve(sp, 0.0, curve), -0.2, 0.4);
  EXPECT_NEAR(phi, 0.5 * (a + b), 1e-9);
  EXPECT_NEAR(phi, 0.123, 1e-6);
}

TEST(FindDecouplingFlux, NoSignChange) {
  const DeviceModel m = DeviceModel::with_curve(SpectralParams{}, 0.0, [](double p) { return 1.0 + p * p; });
  EXPECT_THROW(find_decoupling_flux(m, -0.5, 0.5), InvalidArgument);
}

TEST(DeviceModel, PeriodicAndSymmetricCoupling) {
  const DeviceModel m = DeviceModel::from_spectral(calibrated(), -0.35);
  for (double phi = -0.5; phi <= 0.5; phi += 0.03) {
    EXPECT_NEAR(m.coupling(phi), m.coupling(phi + 1.0), 1e-9);
    EXPECT_NEAR(m.coupling(0.5 + phi), m.coupling(0.5 - phi), 1e-9);
  }
  EXPECT_TRUE(m.has_shift_curve());
  const QubitShift s = m.shift_from_idle(-0.35);
  EXPECT_EQ(s.q1_mhz, 0.0);
  EXPECT_EQ(s.q2_mhz, 0.0);
}

TEST(DispersiveShift, PulledDownByHigherCoupler) {
  const SpectralParams sp = calibrated();
  const QubitShift at_max = dispersive_shift(sp, 0.0);
  const QubitShift at_min = dispersive_shift(sp, 0.5);
  EXPECT_LT(at_max.q1_mhz, 0.0);
  EXPECT_LT(at_min.q1_mhz, at_max.q1_mhz);  // closer coupler, larger push
}

TEST(WorkingPointCheck, TableOneIdle) {
  const SpectralParams sp = calibrated();
  const DeviceModel m = DeviceModel::from_spectral(sp, -0.35);
  const double f11 = sp.f01_q1 + sp.f01_q2;
  const double f20 = 2.0 * sp.f01_q1 + sp.eta_q1;
  const double f02 = 2.0 * sp.f01_q2 + sp.eta_q2;
  const WorkingPointReport r = working_point_check(m, std::abs(f11 - f20), 2, 5.0);
  EXPECT_NEAR(r.target_mhz, 301.0, 1e-9);
  EXPECT_NEAR(r.delta_mhz, 69.0, 1e-9);
  EXPECT_NEAR(r.delta_leak_mhz, std::abs(f11 - f02) * 1e3, 1e-9);
  EXPECT_NEAR(r.delta_leak_mhz, 161.0, 1e-9);
  EXPECT_FALSE(r.hard_collision);
  EXPECT_EQ(r.margins.size(), 6u);
  for (const CollisionMargin& c : r.margins) {
    EXPECT_NEAR(c.margin_mhz, std::abs(c.harmonic * 301.0 - c.transition_mhz), 1e-9);
  }
}

TEST(WorkingPointCheck, DegenerateQubitsCollideAtDc) {
  SpectralParams sp;
  sp.f01_q1 = sp.f01_q2 = 4.8;
  sp.eta_q1 = sp.eta_q2 = 0.0;
  const DeviceModel m = DeviceModel::with_curve(sp, 0.0, [](double) { return 0.0; });
  const WorkingPointReport r = working_point_check(m, 0.3, 1, 1.0);
  EXPECT_DOUBLE_EQ(r.delta_mhz, 0.0);
  EXPECT_TRUE(r.hard_collision);
  EXPECT_TRUE(r.margins.front().warn);
  EXPECT_EQ(r.margins.front().harmonic, 0);
}

TEST(WorkingPointCheck, ConstructedLeakageCollision) {
  const DeviceModel m = DeviceModel::from_spectral(calibrated(), -0.35);
  const WorkingPointReport r = working_point_check(m, 0.161, 2, 1.0);
  bool found = false;
  for (const CollisionMargin& c : r.margins) {
    if (c.harmonic == 1 && c.transition == Transition::kLeak11_02) {
      EXPECT_NEAR(c.margin_mhz, 0.0, 1e-9);
      EXPECT_TRUE(c.warn);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(r.hard_collision);
  EXPECT_THROW(working_point_check(m, 0.3, 1, 1.0, Transition::kSwap01_10), InvalidArgument);
}

}  // namespace
}  // namespace pcz
