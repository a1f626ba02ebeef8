#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "pcz/dynamics.hpp"

namespace pcz {
namespace {

constexpr double kSlope = 400.0;  // MHz per flux quantum for the linear test curve

DeviceModel linear_device(const SpectralParams& sp = SpectralParams{}) {
  return DeviceModel::with_curve(sp, 0.0, [](double phi) { return kSlope * phi; });
}

// Widely separated qubits: only |11> <-> |20> is near the drive.
SpectralParams two_level_spectrum() {
  SpectralParams sp;
  sp.f01_q2 = 5.5;
  return sp;
}

double resonance(const SpectralParams& sp) {
  return std::abs(sp.f01_q1 + sp.f01_q2 - (2.0 * sp.f01_q1 + sp.eta_q1));
}

// Piecewise-constant midpoint exponentials of the rotating-frame Hamiltonian.
Eigen::MatrixXcd reference_propagator(const DeviceModel& model, const PulseParams& pulse, int steps) {
  const auto f = diag_frequencies(model, model.flux_idle(), false);
  const std::array<double, kSubspaceDim> no_shift{};
  const double h = pulse.t_total() / steps;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(kSubspaceDim, kSubspaceDim);
  for (int s = 0; s < steps; ++s) {
    const double t = (s + 0.5) * h;
    const CMatrix hm = interaction_hamiltonian(f, model.coupling(model.flux_idle() + flux_at(pulse, t)), no_shift, t);
    Eigen::MatrixXcd H(kSubspaceDim, kSubspaceDim);
    for (std::size_t r = 0; r < kSubspaceDim; ++r) {
      for (std::size_t c = 0; c < kSubspaceDim; ++c) H(r, c) = hm(r, c);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    Eigen::VectorXcd phases(kSubspaceDim);
    for (int k = 0; k < static_cast<int>(kSubspaceDim); ++k) phases[k] = std::polar(1.0, -es.eigenvalues()[k] * h);
    u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * u;
  }
  return u;
}

TEST(DiagFrequencies, TableOneValues) {
  SpectralParams sp;
  const auto f = diag_frequencies(linear_device(sp), 0.0, false);
  EXPECT_EQ(f[basis::k00], 0.0);
  EXPECT_DOUBLE_EQ(f[basis::k11], f[basis::k10] + f[basis::k01]);
  EXPECT_NEAR(std::abs(f[basis::k11] - f[basis::k20]), 0.301, 1e-12);
  EXPECT_NEAR(f[basis::k02], 2.0 * 4.839 - 0.230, 1e-12);
}

TEST(DiagFrequencies, DegenerateHarmonicLimit) {
  SpectralParams sp;
  sp.f01_q1 = sp.f01_q2 = 4.8;
  sp.eta_q1 = sp.eta_q2 = 0.0;
  const auto f = diag_frequencies(linear_device(sp), 0.0, false);
  EXPECT_DOUBLE_EQ(f[basis::k02], f[basis::k11]);
  EXPECT_DOUBLE_EQ(f[basis::k20], f[basis::k11]);
}

TEST(DiagFrequencies, ShiftOnlyWhenRequested) {
  const DeviceModel m = DeviceModel::from_spectral(SpectralParams{}, -0.35);
  EXPECT_EQ(diag_frequencies(m, -0.2, false), diag_frequencies(m, 0.3, false));
  const auto shifted = diag_frequencies(m, 0.0, true);
  const auto idle = diag_frequencies(m, -0.35, true);
  EXPECT_NE(shifted[basis::k10], idle[basis::k10]);
  EXPECT_EQ(idle, diag_frequencies(m, -0.35, false));
}

TEST(InteractionHamiltonian, HermitianWithFreeGroundState) {
  const auto f = diag_frequencies(linear_device(), 0.0, false);
  const std::array<double, kSubspaceDim> shift = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
  const CMatrix h = interaction_hamiltonian(f, 7.3, shift, 12.345);
  EXPECT_LT(max_abs_diff(h, h.adjoint()), 1e-15);
  for (std::size_t k = 1; k < kSubspaceDim; ++k) {
    EXPECT_EQ(h(0, k), cdouble(0.0));
    EXPECT_EQ(h(k, 0), cdouble(0.0));
  }
  EXPECT_NEAR(std::abs(h(basis::k11, basis::k20)), std::sqrt(2.0) * kTwoPi * 7.3e-3, 1e-15);
  EXPECT_NEAR(std::abs(h(basis::k10, basis::k01)), kTwoPi * 7.3e-3, 1e-15);
}

TEST(Evolve, ZeroAmplitudeGivesIdlePhases) {
  const DeviceModel m = linear_device();
  PulseParams p;
  const SubspaceUnitary u = evolve(m, p);
  const auto f = diag_frequencies(m, 0.0, false);
  for (std::size_t k = 0; k < kSubspaceDim; ++k) {
    EXPECT_LT(std::abs(u.matrix(k, k) - std::polar(1.0, -kTwoPi * f[k] * u.t_total)), 1e-9);
  }
  EXPECT_LT(max_abs_diff(interaction_frame(u, m).matrix, CMatrix::identity(kSubspaceDim)), 1e-12);
}

TEST(Evolve, MatchesExponentialProductOracle) {
  const DeviceModel m = linear_device();
  PulseParams p;
  p.amplitude_scale = 0.02;
  p.f_carrier = 0.301;
  const SubspaceUnitary u = interaction_frame(evolve(m, p), m);
  const Eigen::MatrixXcd ref = reference_propagator(m, p, 40000);
  double diff = 0.0;
  for (std::size_t r = 0; r < kSubspaceDim; ++r) {
    for (std::size_t c = 0; c < kSubspaceDim; ++c) diff = std::max(diff, std::abs(u.matrix(r, c) - ref(r, c)));
  }
  EXPECT_LT(diff, 1e-5);
}

TEST(Evolve, UnitaryAlongTheTrajectory) {
  const DeviceModel m = linear_device();
  PulseParams p;
  p.amplitude_scale = 0.03;
  EvolveOptions o;
  o.checkpoints = 10;
  const EvolveReport r = evolve_detailed(m, p, o);
  ASSERT_EQ(r.checkpoints.size(), 10u);
  for (const SubspaceUnitary& c : r.checkpoints) {
    EXPECT_LT(unitarity_defect(c.matrix), 1e-8);
    EXPECT_GT(c.t_total, 0.0);
    EXPECT_LT(c.t_total, p.t_total());
  }
  EXPECT_LT(unitarity_defect(r.unitary.matrix), 1e-8);
  EXPECT_LT(r.achieved_delta, 1e-7);
  // |00> is untouched.
  EXPECT_NEAR(std::abs(r.unitary.matrix(basis::k00, basis::k00)), 1.0, 1e-14);
}

TEST(Evolve, StepHalvingChangesFidelityLittle) {
  const DeviceModel m = linear_device();
  PulseParams p;
  p.amplitude_scale = 0.03;
  EvolveOptions o;
  const EvolveReport coarse = evolve_detailed(m, p, o);
  o.dt = coarse.dt / 2.0;
  const EvolveReport fine = evolve_detailed(m, p, o);
  const CMatrix overlap = coarse.unitary.matrix.adjoint() * fine.unitary.matrix;
  const double f = std::norm(overlap.trace()) / 36.0;
  EXPECT_GT(f, 1.0 - 1e-6);
}

TEST(Evolve, Deterministic) {
  const DeviceModel m = linear_device();
  PulseParams p;
  p.amplitude_scale = 0.03;
  EXPECT_EQ(evolve(m, p).matrix, evolve(m, p).matrix);
}

TEST(Evolve, RefinementCapReportsAchievedDelta) {
  const DeviceModel m = linear_device();
  PulseParams p;
  p.amplitude_scale = 0.03;
  EvolveOptions o;
  o.dt = 1.0;
  o.tolerance = 1e-15;
  o.max_refinements = 1;
  try {
    evolve_detailed(m, p, o);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.achieved(), 1e-15);
  }
}

TEST(Evolve, FarOffResonantDrivePreservesPopulations) {
  const DeviceModel m = linear_device();
  PulseParams p;
  p.lambda = {0.0, 1.0, 0.0, 0.0};
  p.amplitude_scale = 0.0075;  // peak coupling 6 MHz
  p.f_carrier = 0.62;          // > 300 MHz from every transition
  const SubspaceUnitary u = interaction_frame(evolve(m, p), m);
  for (std::size_t k = 0; k < kSubspaceDim; ++k) EXPECT_GT(std::norm(u.matrix(k, k)), 1.0 - 1e-3) << k;
}

TEST(Evolve, ResonantFullCycleMatchesRotatingWaveSolution) {
  const SpectralParams sp = two_level_spectrum();
  const DeviceModel m = linear_device(sp);
  PulseParams p;
  p.lambda = {0.0, 1.0, 0.0, 0.0};
  p.f_carrier = resonance(sp);
  // sqrt(2) * 2 pi * 1e-3 * slope * a * integral(1 - cos) = 2 pi, integral = T.
  p.amplitude_scale = 1.0 / (std::sqrt(2.0) * 1e-3 * kSlope * p.t_active);
  const SubspaceUnitary u = interaction_frame(evolve(m, p), m);
  const cdouble a11 = u.matrix(basis::k11, basis::k11);
  EXPECT_NEAR(std::norm(a11), 1.0, 2e-2);
  EXPECT_LT(std::abs(std::remainder(std::arg(a11) - kPi, kTwoPi)), 0.05);

  // Half the area: complete transfer to |20> in the rotating-wave solution.
  p.amplitude_scale /= 2.0;
  const SubspaceUnitary half = interaction_frame(evolve(m, p), m);
  EXPECT_NEAR(std::norm(half.matrix(basis::k20, basis::k11)), 1.0, 2e-2);
}

TEST(Frames, InverseOfEachOther) {
  const DeviceModel m = linear_device();
  PulseParams p;
  p.amplitude_scale = 0.03;
  const SubspaceUnitary u = evolve(m, p);
  EXPECT_LT(max_abs_diff(lab_frame(interaction_frame(u, m), m).matrix, u.matrix), 1e-13);
  EXPECT_LT(max_abs_diff(interaction_frame(lab_frame(u, m), m).matrix, u.matrix), 1e-13);
}

TEST(Evolve, ShiftFlagWithoutShiftCurveIsNoOp) {
  const DeviceModel m = linear_device();
  PulseParams p;
  p.amplitude_scale = 0.03;
  EXPECT_EQ(evolve(m, p, true).matrix, evolve(m, p, false).matrix);
}

}  // namespace
}  // namespace pcz
