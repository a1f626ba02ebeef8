#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pcz/benchmark.hpp"
#include "pcz/gate_metrics.hpp"

namespace pcz {
namespace {

const std::vector<int> kCycleDepths = {1, 3, 6, 10, 15, 25, 40};

XebOptions cycle_options(std::uint64_t seed = 1, int circuits = 10) {
  XebOptions o;
  o.depths = kCycleDepths;
  o.n_circuits = circuits;
  o.seed = seed;
  return o;
}

CMatrix cz_with_phase_error(double eps) {
  CMatrix u = ideal_cz_subspace();
  u(basis::k11, basis::k11) = std::polar(1.0, kPi + eps);
  return u;
}

std::vector<double> synthetic(const std::vector<int>& m, double a, double p, double b) {
  std::vector<double> y;
  for (int d : m) y.push_back(a * std::pow(p, d) + b);
  return y;
}

TEST(NoiseModel, Validation) {
  EXPECT_NO_THROW(NoiseModel{}.validate());
  EXPECT_NO_THROW(NoiseModel::noiseless().validate());
  NoiseModel n;
  n.t2_q1 = 2.5 * n.t1_q1;
  EXPECT_THROW(n.validate(), InvalidArgument);
  n = NoiseModel{};
  n.t_cz = -1.0;
  EXPECT_THROW(n.validate(), InvalidArgument);
  n = NoiseModel{};
  n.t1_q2 = 0.0;
  EXPECT_THROW(n.validate(), InvalidArgument);
  n = NoiseModel{};
  n.depolarizing = 1.5;
  EXPECT_THROW(n.validate(), InvalidArgument);
}

TEST(Embedding, PlacesSubspaceLevels) {
  CMatrix u(kSubspaceDim, kSubspaceDim);
  for (std::size_t r = 0; r < kSubspaceDim; ++r) {
    for (std::size_t c = 0; c < kSubspaceDim; ++c) u(r, c) = cdouble(static_cast<double>(10 * r + c), 0.0);
  }
  const CMatrix e = embed_two_qutrit(u);
  // subspace order 00, 01, 10, 11, 02, 20 -> qutrit index 3 q1 + q2
  const std::size_t map[] = {0, 1, 3, 4, 2, 6};
  for (std::size_t r = 0; r < kSubspaceDim; ++r) {
    for (std::size_t c = 0; c < kSubspaceDim; ++c) EXPECT_EQ(e(map[r], map[c]), u(r, c));
  }
  for (std::size_t k : {5, 7, 8}) EXPECT_EQ(e(k, k), cdouble(1.0));
}

TEST(VirtualZ, RemovesSingleQubitPhases) {
  CMatrix u = ideal_cz_subspace();
  u(basis::k10, basis::k10) = std::polar(1.0, 0.3);
  u(basis::k01, basis::k01) = std::polar(1.0, -0.7);
  u(basis::k11, basis::k11) = std::polar(1.0, kPi - 0.4);
  const CMatrix c = with_virtual_z(SubspaceUnitary{u, 100.0});
  for (std::size_t k : {basis::k00, basis::k01, basis::k10, basis::k11}) {
    EXPECT_LT(std::abs(c(k, k) - ideal_cz_subspace()(k, k)), 1e-14);
  }
  // Second levels pick up twice the qubit's correction.
  EXPECT_LT(std::abs(c(basis::k20, basis::k20) - std::polar(1.0, -0.6)), 1e-14);
}

TEST(XebSimulate, NoiselessIdealCz) {
  const DecayDataset d = xeb_simulate(ideal_cz_subspace(), NoiseModel::noiseless(), cycle_options());
  ASSERT_EQ(d.depths, kCycleDepths);
  for (std::size_t i = 0; i < d.depths.size(); ++i) {
    EXPECT_NEAR(d.alpha[i], 1.0, 1e-9);
    EXPECT_NEAR(d.sqrt_purity[i], 1.0, 1e-9);
    EXPECT_EQ(d.leak_pop[i], 0.0);
  }
}

TEST(XebSimulate, NoiselessSingleQubitKinds) {
  for (XebKind k : {XebKind::kSingleQ1, XebKind::kSingleQ2}) {
    XebOptions o = cycle_options();
    o.kind = k;
    const DecayDataset d = xeb_simulate(ideal_cz_subspace(), NoiseModel::noiseless(), o);
    for (double a : d.alpha) EXPECT_NEAR(a, 1.0, 1e-9);
    for (double s : d.sqrt_purity) EXPECT_NEAR(s, 1.0, 1e-9);
  }
}

TEST(XebSimulate, DepolarizingRoundTrip) {
  NoiseModel n = NoiseModel::noiseless();
  n.depolarizing = 0.01;
  const DecayDataset d = xeb_simulate(ideal_cz_subspace(), n, cycle_options(2, 20));
  const FitResult fa = fit_decay(d.depths, d.alpha);
  const FitResult fp = fit_decay(d.depths, d.sqrt_purity);
  EXPECT_NEAR(fa.p, 1.0 - 0.01 * 16.0 / 15.0, 1e-3);
  EXPECT_NEAR(fp.p, 1.0 - 0.01 * 16.0 / 15.0, 1e-3);
}

TEST(XebSimulate, SeededDeterminism) {
  const NoiseModel n;
  const CMatrix g = cz_with_phase_error(0.05);
  const DecayDataset a = xeb_simulate(g, n, cycle_options(9, 5));
  const DecayDataset b = xeb_simulate(g, n, cycle_options(9, 5));
  EXPECT_EQ(a.alpha, b.alpha);
  EXPECT_EQ(a.sqrt_purity, b.sqrt_purity);
  EXPECT_EQ(a.leak_pop, b.leak_pop);
  const DecayDataset c = xeb_simulate(g, n, cycle_options(10, 5));
  EXPECT_NE(a.alpha, c.alpha);
}

TEST(XebSimulate, PurityBoundsFidelity) {
  const DecayDataset d = xeb_simulate(cz_with_phase_error(0.1), NoiseModel{}, cycle_options(3, 100));
  for (std::size_t i = 0; i < d.depths.size(); ++i) {
    EXPECT_GE(d.sqrt_purity[i], d.alpha[i] - 2e-2) << d.depths[i];
    EXPECT_GE(d.alpha[i], -0.1);
    EXPECT_LE(d.alpha[i], 1.1);
    EXPECT_GE(d.sqrt_purity[i], -0.1);
    EXPECT_LE(d.sqrt_purity[i], 1.1);
  }
}

TEST(XebSimulate, LeakyGateAccumulatesLeakage) {
  // Partial |11> -> |20> transfer.
  CMatrix g = ideal_cz_subspace();
  const double th = 0.1;
  g(basis::k11, basis::k11) = -std::cos(th);
  g(basis::k20, basis::k20) = std::cos(th);
  g(basis::k20, basis::k11) = std::sin(th);
  g(basis::k11, basis::k20) = std::sin(th);
  NoiseModel n;
  const DecayDataset d = xeb_simulate(g, n, cycle_options(4, 10));
  EXPECT_GT(d.leak_pop.back(), d.leak_pop.front());
  for (double l : d.leak_pop) {
    EXPECT_GE(l, 0.0);
    EXPECT_LE(l, 1.0);
  }
}

TEST(XebSimulate, ShotsApproachExact) {
  const NoiseModel n;
  XebOptions o = cycle_options(5, 10);
  const DecayDataset exact = xeb_simulate(ideal_cz_subspace(), n, o);
  o.shots = 20000;
  const DecayDataset sampled = xeb_simulate(ideal_cz_subspace(), n, o);
  EXPECT_EQ(sampled.alpha, xeb_simulate(ideal_cz_subspace(), n, o).alpha);
  for (std::size_t i = 0; i < exact.alpha.size(); ++i) EXPECT_NEAR(sampled.alpha[i], exact.alpha[i], 0.05);
}

TEST(XebSimulate, RejectsBadInput) {
  XebOptions o = cycle_options();
  o.depths = {5};
  EXPECT_THROW(xeb_simulate(ideal_cz_subspace(), NoiseModel{}, o), InvalidArgument);
  o = cycle_options();
  o.depths = {5, 3, 8};
  EXPECT_THROW(xeb_simulate(ideal_cz_subspace(), NoiseModel{}, o), InvalidArgument);
  o = cycle_options();
  o.n_circuits = 0;
  EXPECT_THROW(xeb_simulate(ideal_cz_subspace(), NoiseModel{}, o), InvalidArgument);
  NoiseModel bad;
  bad.t2_q2 = 1000.0;
  EXPECT_THROW(xeb_simulate(ideal_cz_subspace(), bad, cycle_options()), InvalidArgument);
}

TEST(FitDecay, NoiselessSelfFit) {
  std::vector<int> m;
  for (int i = 1; i <= 10; ++i) m.push_back(i);
  const FitResult f = fit_decay(m, synthetic(m, 0.9, 0.97, 0.05));
  EXPECT_NEAR(f.a, 0.9, 1e-6);
  EXPECT_NEAR(f.p, 0.97, 1e-6);
  EXPECT_NEAR(f.b, 0.05, 1e-6);
  EXPECT_LT(f.residual, 1e-9);
}

TEST(FitDecay, NoisyMonteCarlo) {
  std::vector<int> m;
  for (int i = 0; i < 20; ++i) m.push_back(1 + 5 * i);
  double sq = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<double> y = synthetic(m, 0.9, 0.97, 0.05);
    for (double& v : y) v += noise(rng);
    const double err = fit_decay(m, y).p - 0.97;
    sq += err * err;
  }
  EXPECT_LT(std::sqrt(sq / 100.0), 3e-3);
}

TEST(FitDecay, Errors) {
  EXPECT_THROW(fit_decay({1, 2, 3}, {0.5, 0.5, 0.5}), FitError);
  EXPECT_THROW(fit_decay({1, 2}, {0.5, 0.4}), FitError);
  EXPECT_THROW(fit_decay({1, 2, 3}, {0.5, 0.4}), FitError);
  const FitResult flat = fit_decay_or_flat({1, 2, 3}, {0.5, 0.5, 0.5});
  EXPECT_EQ(flat.a, 0.0);
  EXPECT_EQ(flat.p, 1.0);
  EXPECT_EQ(flat.b, 0.5);
}

TEST(ErrorRates, TableTwoArithmetic) {
  EXPECT_NEAR(pauli_error(0.9884, 2), 0.0109, 5e-5);
  EXPECT_EQ(pauli_error(1.0, 2), 0.0);
  EXPECT_NEAR(pauli_error(0.99787, 1), 0.0016, 1e-5);
  EXPECT_NEAR(extract_gate_error(0.0109, 0.0016, 0.0015), 0.0078, 5e-5);
  EXPECT_NEAR(extract_gate_error(0.02, 0.0, 0.0), 0.02, 1e-15);
  EXPECT_NEAR(extract_gate_error(1.0 - 0.99 * 0.98, 0.01, 0.02), 0.0, 1e-15);
  EXPECT_THROW(extract_gate_error(0.1, 1.0, 0.0), InvalidArgument);
  EXPECT_NEAR(gate_fidelity(0.0078, 2), 0.9938, 5e-5);
  EXPECT_NEAR(gate_fidelity(0.0016, 1), 0.9989, 5e-5);
  EXPECT_EQ(gate_fidelity(0.0, 2), 1.0);
}

TEST(ErrorRates, LeakageFormula) {
  EXPECT_EQ(leakage_error(FitResult{0.0, 0.9, 0.1, 0.0}, 2), 0.0);
  EXPECT_EQ(leakage_error(FitResult{-0.3, 1.0, 0.3, 0.0}, 2), 0.0);
  EXPECT_NEAR(leakage_error(FitResult{-0.1, 0.98, 0.1, 0.0}, 2), 0.1 * 0.02 * 15.0 / 16.0, 1e-15);
}

TEST(ErrorRates, LeakageRoundTrip) {
  // Rate model: leak L1 and return L2 per cycle.
  const double l1 = 2e-3, l2 = 2e-2;
  std::vector<int> m;
  for (int i = 0; i <= 30; ++i) m.push_back(5 * i);
  std::vector<double> y;
  double pop = 0.0;
  int step = 0;
  for (int d : m) {
    for (; step < d; ++step) pop = pop * (1.0 - l2) + (1.0 - pop) * l1;
    y.push_back(pop);
  }
  const double r = leakage_error(fit_decay(m, y), 2);
  EXPECT_NEAR(r, l1 * 15.0 / 16.0, 0.1 * l1 * 15.0 / 16.0);
}

TEST(Budget, TableTwoCycleRow) {
  const ErrorBudget row = budget_row("cycle", BudgetRowInputs{0.9884, 0.9899, 0.0021, 156.0}, 2);
  EXPECT_NEAR(row.r_p_xeb, 0.0109, 5e-5);
  EXPECT_NEAR(row.r_p_spb, 0.0095, 5e-5);
  EXPECT_NEAR(row.r_p_ctrl, 0.0014, 5e-5);
  EXPECT_DOUBLE_EQ(row.r_p_ctrl, row.r_p_xeb - row.r_p_spb);
  EXPECT_DOUBLE_EQ(row.r_p_dec, row.r_p_spb - row.r_leak);
  EXPECT_NEAR(row.fidelity, gate_fidelity(row.r_p_xeb, 2), 1e-15);
}

TEST(Budget, IdentitiesHoldForArbitraryInputs) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> p(0.95, 1.0), l(0.0, 0.01);
  for (int i = 0; i < 50; ++i) {
    const BudgetTable t = budget_from_inputs(BudgetRowInputs{p(rng), p(rng), l(rng), 50.0},
                                             BudgetRowInputs{p(rng), p(rng), l(rng), 50.0},
                                             BudgetRowInputs{p(rng), p(rng), l(rng), 156.0});
    for (const ErrorBudget* r : {&t.q1, &t.q2, &t.cycle, &t.cz}) {
      EXPECT_NEAR(r->r_p_ctrl, r->r_p_xeb - r->r_p_spb, 1e-12);
      EXPECT_NEAR(r->r_p_dec, r->r_p_spb - r->r_leak, 1e-12);
    }
    EXPECT_NEAR(t.cz.r_p_xeb, extract_gate_error(t.cycle.r_p_xeb, t.q1.r_p_xeb, t.q2.r_p_xeb), 1e-15);
    EXPECT_FALSE(t.cz.p_xeb.has_value());
    EXPECT_DOUBLE_EQ(t.cz.duration_ns, 106.0);
  }
}

TEST(Budget, NoiselessGivesZeroRates) {
  const std::vector<int> single = {1, 5, 10, 20};
  const BudgetExperiment e =
      run_budget_experiment(ideal_cz_subspace(), NoiseModel::noiseless(), {1, 5, 10, 20}, single, 5, 1);
  for (const ErrorBudget* r : {&e.table.q1, &e.table.q2, &e.table.cycle, &e.table.cz}) {
    EXPECT_NEAR(r->r_p_xeb, 0.0, 1e-9) << r->gate;
    EXPECT_NEAR(r->r_p_spb, 0.0, 1e-9) << r->gate;
    EXPECT_NEAR(r->r_leak, 0.0, 1e-9) << r->gate;
    EXPECT_NEAR(r->fidelity, 1.0, 1e-9) << r->gate;
  }
}

TEST(Budget, ControlErrorOnly) {
  const std::vector<int> depths = {1, 3, 6, 10, 15, 25, 40, 60};
  const BudgetExperiment e =
      run_budget_experiment(cz_with_phase_error(0.15), NoiseModel::noiseless(), depths, {1, 5, 10, 20}, 20, 2);
  EXPECT_NEAR(e.table.cz.r_p_dec, 0.0, 2e-4);
  EXPECT_GT(e.table.cz.r_p_ctrl, 1e-3);
}

TEST(Budget, ReportsMirrorRows) {
  const BudgetTable t = budget_from_inputs(BudgetRowInputs{0.9978, 0.9979, 0.0, 50.0},
                                           BudgetRowInputs{0.998, 0.998, 0.0, 50.0},
                                           BudgetRowInputs{0.9884, 0.9899, 0.0021, 156.0});
  const std::string j = budget_json(t);
  for (const char* key : {"\"Q1-pi/2\"", "\"cycle-CZ\"", "\"CZ\"", "\"r_p_dec\"", "\"fidelity\""}) {
    EXPECT_NE(j.find(key), std::string::npos) << key;
  }
  const std::string txt = budget_text(t);
  EXPECT_NE(txt.find("CZ"), std::string::npos);
  EXPECT_NE(txt.find("r_p,ctrl"), std::string::npos) << txt;
}

}  // namespace
}  // namespace pcz
