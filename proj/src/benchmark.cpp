#include "pcz/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <nlohmann/json.hpp>

#include "pcz/gate_metrics.hpp"

namespace pcz {
namespace {

constexpr std::size_t kQutrit = 3;

// Subspace basis index -> two-qutrit index (3 * level_q1 + level_q2).
constexpr std::array<std::size_t, kSubspaceDim> kEmbed = {0, 1, 3, 4, 2, 6};

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

CMatrix haar_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  double q[4];
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : q) {
      v = normal(rng);
      norm += v * v;
    }
  } while (norm < 1e-12);
  norm = std::sqrt(norm);
  for (double& v : q) v /= norm;
  const cdouble a{q[0], q[1]};
  const cdouble b{q[2], q[3]};
  return CMatrix(2, 2, {a, b, -std::conj(b), std::conj(a)});
}

CMatrix qubit_in_qutrit(const CMatrix& u) {
  CMatrix out = CMatrix::identity(kQutrit);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) out(r, c) = u(r, c);
  }
  return out;
}

CMatrix conjugate(const CMatrix& u, const CMatrix& rho) { return u * rho * u.adjoint(); }

// Operator acting on qutrit `q` (0 = most significant) of an n-qutrit register.
CMatrix on_qutrit(const CMatrix& op, int n, int q) {
  CMatrix out = CMatrix::identity(1);
  for (int i = 0; i < n; ++i) out = kron(out, i == q ? op : CMatrix::identity(kQutrit));
  return out;
}

struct QutritNoise {
  double t1 = kNoDecay;  // us
  double t2 = kNoDecay;
};

class Register {
 public:
  explicit Register(std::vector<QutritNoise> noise) : noise_(std::move(noise)), n_(static_cast<int>(noise_.size())) {
    dim_ = ipow(kQutrit, n_);
    rho_ = CMatrix(dim_, dim_);
    rho_(0, 0) = 1.0;
  }

  std::size_t dim() const { return dim_; }
  const CMatrix& rho() const { return rho_; }

  void apply(const CMatrix& u) { rho_ = conjugate(u, rho_); }

  void idle(double t_ns) {
    for (int q = 0; q < n_; ++q) {
      const QutritNoise& nq = noise_[q];
      if (std::isfinite(nq.t1)) amplitude_damp(q, t_ns * 1e-3 / nq.t1);
      const double gamma_phi = 1.0 / nq.t2 - 0.5 / nq.t1;
      if (gamma_phi > 0.0) dephase(q, gamma_phi * t_ns * 1e-3);
    }
  }

  // (1 - lambda) rho + lambda Tr(rho_c) I_c / D on the computational block.
  void depolarize(double lambda, std::span<const std::size_t> comp) {
    cdouble tr = 0.0;
    for (std::size_t i : comp) tr += rho_(i, i);
    for (std::size_t r : comp) {
      for (std::size_t c : comp) rho_(r, c) *= (1.0 - lambda);
      rho_(r, r) += lambda * tr / static_cast<double>(comp.size());
    }
  }

 private:
  std::size_t level(std::size_t index, int q) const { return (index / ipow(kQutrit, n_ - 1 - q)) % kQutrit; }

  void amplitude_damp(int q, double x) {
    const double g1 = 1.0 - std::exp(-x);
    const double g2 = 1.0 - std::exp(-2.0 * x);
    CMatrix k0(kQutrit, kQutrit);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - g1);
    k0(2, 2) = std::sqrt(1.0 - g2);
    CMatrix k1(kQutrit, kQutrit);
    k1(0, 1) = std::sqrt(g1);
    CMatrix k2(kQutrit, kQutrit);
    k2(1, 2) = std::sqrt(g2);
    CMatrix out = conjugate(on_qutrit(k0, n_, q), rho_);
    out += conjugate(on_qutrit(k1, n_, q), rho_);
    out += conjugate(on_qutrit(k2, n_, q), rho_);
    rho_ = std::move(out);
  }

  void dephase(int q, double x) {
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = 0; c < dim_; ++c) {
        const double d = static_cast<double>(level(r, q)) - static_cast<double>(level(c, q));
        if (d != 0.0) rho_(r, c) *= std::exp(-d * d * x);
      }
    }
  }

  std::vector<QutritNoise> noise_;
  int n_;
  std::size_t dim_ = 0;
  CMatrix rho_;
};

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

std::mt19937_64 stream(std::uint64_t seed, XebKind kind, int circuit, int extra) {
  std::seed_seq seq{lo32(seed), hi32(seed), static_cast<std::uint32_t>(kind), static_cast<std::uint32_t>(circuit),
                    static_cast<std::uint32_t>(extra)};
  return std::mt19937_64(seq);
}

struct DepthAccumulator {
  double xeb_num = 0.0;
  double xeb_den = 0.0;
  double var_noisy = 0.0;
  double var_coherent = 0.0;
  double leak = 0.0;
};

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

}  // namespace

NoiseModel NoiseModel::noiseless() {
  NoiseModel n;
  n.t1_q1 = n.t1_q2 = n.t2_q1 = n.t2_q2 = kNoDecay;
  return n;
}

void NoiseModel::validate() const {
  const double t1[] = {t1_q1, t1_q2};
  const double t2[] = {t2_q1, t2_q2};
  for (int q = 0; q < 2; ++q) {
    if (!(t1[q] > 0.0) || !(t2[q] > 0.0)) throw InvalidArgument("noise model: T1 and T2 must be positive");
    if (!(t2[q] <= 2.0 * t1[q])) throw InvalidArgument("noise model: T2 exceeds 2 T1");
  }
  if (!(t_single > 0.0) || !(t_cz > 0.0) || !std::isfinite(t_single) || !std::isfinite(t_cz)) {
    throw InvalidArgument("noise model: slot durations must be positive and finite");
  }
  if (!(depolarizing >= 0.0 && depolarizing < 1.0)) throw InvalidArgument("noise model: depolarizing must be in [0, 1)");
}

void DecayDataset::validate() const {
  const std::size_t n = depths.size();
  if (alpha.size() != n || sqrt_purity.size() != n || leak_pop.size() != n) {
    throw InvalidArgument("decay dataset: column lengths differ");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (depths[i] <= depths[i - 1]) throw InvalidArgument("decay dataset: depths must increase strictly");
  }
}

CMatrix embed_two_qutrit(const CMatrix& u) {
  if (u.rows() != kSubspaceDim || u.cols() != kSubspaceDim) throw InvalidArgument("embed_two_qutrit: expected 6x6");
  CMatrix out = CMatrix::identity(kQutrit * kQutrit);
  for (std::size_t r = 0; r < kSubspaceDim; ++r) {
    for (std::size_t c = 0; c < kSubspaceDim; ++c) out(kEmbed[r], kEmbed[c]) = u(r, c);
  }
  return out;
}

CMatrix with_virtual_z(const SubspaceUnitary& frame_removed) {
  const GateMetrics m = extract_metrics(frame_removed);
  // Excitation count of each qubit per basis state {00, 01, 10, 11, 02, 20}.
  constexpr std::array<int, kSubspaceDim> n1 = {0, 0, 1, 1, 0, 2};
  constexpr std::array<int, kSubspaceDim> n2 = {0, 1, 0, 1, 2, 0};
  std::array<cdouble, kSubspaceDim> z{};
  for (std::size_t i = 0; i < kSubspaceDim; ++i) z[i] = std::polar(1.0, -(n1[i] * m.theta_z1 + n2[i] * m.theta_z2));
  return CMatrix::diagonal(z) * frame_removed.matrix;
}

DecayDataset xeb_simulate(const CMatrix& gate, const NoiseModel& noise, const XebOptions& options) {
  noise.validate();
  if (options.depths.size() < 2) throw InvalidArgument("xeb_simulate: need at least two depths");
  if (options.n_circuits < 1) throw InvalidArgument("xeb_simulate: n_circuits must be positive");
  if (options.shots < 0) throw InvalidArgument("xeb_simulate: shots must be non-negative");
  for (std::size_t i = 0; i < options.depths.size(); ++i) {
    if (options.depths[i] < 1 || (i > 0 && options.depths[i] <= options.depths[i - 1])) {
      throw InvalidArgument("xeb_simulate: depths must be positive and strictly increasing");
    }
  }

  const bool cycle = options.kind == XebKind::kCycle;
  const int n = cycle ? 2 : 1;
  std::vector<QutritNoise> qnoise;
  if (cycle || options.kind == XebKind::kSingleQ1) qnoise.push_back({noise.t1_q1, noise.t2_q1});
  if (cycle || options.kind == XebKind::kSingleQ2) qnoise.push_back({noise.t1_q2, noise.t2_q2});

  const std::size_t d_qubit = ipow(2, n);
  const std::vector<std::size_t> comp = cycle ? std::vector<std::size_t>{0, 1, 3, 4} : std::vector<std::size_t>{0, 1};
  const double lambda = noise.depolarizing * static_cast<double>(d_qubit * d_qubit) /
                        static_cast<double>(d_qubit * d_qubit - 1);

  CMatrix gate9;
  CMatrix ideal_cz;
  if (cycle) {
    gate9 = embed_two_qutrit(gate);
    const cdouble cz[] = {1.0, 1.0, 1.0, -1.0};
    ideal_cz = CMatrix::diagonal(cz);
  }

  const int max_depth = options.depths.back();
  std::vector<DepthAccumulator> acc(options.depths.size());
  const double dq = static_cast<double>(d_qubit);

  for (int c = 0; c < options.n_circuits; ++c) {
    std::mt19937_64 rng = stream(options.seed, options.kind, c, 0);
    Register reg(qnoise);
    CMatrix psi(d_qubit, 1);
    psi(0, 0) = 1.0;
    // The same circuit with the actual gate and no decoherence: reference speckle for the purity.
    CMatrix chi(reg.dim(), 1);
    chi(0, 0) = 1.0;

    auto random_layer = [&](std::mt19937_64& g) {
      CMatrix qutrit_layer = CMatrix::identity(1);
      CMatrix qubit_layer = CMatrix::identity(1);
      for (int q = 0; q < n; ++q) {
        const CMatrix u = haar_su2(g);
        qutrit_layer = kron(qutrit_layer, qubit_in_qutrit(u));
        qubit_layer = kron(qubit_layer, u);
      }
      return std::pair{qutrit_layer, qubit_layer};
    };

    std::size_t next = 0;
    for (int depth = 1; depth <= max_depth; ++depth) {
      const auto [layer9, layer4] = random_layer(rng);
      reg.apply(layer9);
      reg.idle(noise.t_single);
      psi = layer4 * psi;
      chi = layer9 * chi;
      if (cycle) {
        reg.apply(gate9);
        reg.idle(noise.t_cz);
        psi = ideal_cz * psi;
        chi = gate9 * chi;
      }
      if (lambda > 0.0) reg.depolarize(lambda, comp);
      if (depth != options.depths[next]) continue;

      Register measured = reg;
      CMatrix psi_final = psi;
      CMatrix chi_final = chi;
      if (cycle) {
        std::mt19937_64 final_rng = stream(options.seed, options.kind, c, depth);
        const auto [f9, f4] = random_layer(final_rng);
        measured.apply(f9);
        measured.idle(noise.t_single);
        psi_final = f4 * psi_final;
        chi_final = f9 * chi_final;
      }

      std::vector<double> pop(measured.dim());
      for (std::size_t i = 0; i < pop.size(); ++i) pop[i] = std::max(0.0, measured.rho()(i, i).real());
      if (options.shots > 0) {
        std::mt19937_64 shot_rng = stream(options.seed, options.kind, c, -depth);
        std::discrete_distribution<std::size_t> dist(pop.begin(), pop.end());
        std::vector<double> counts(pop.size(), 0.0);
        for (int s = 0; s < options.shots; ++s) counts[dist(shot_rng)] += 1.0;
        for (std::size_t i = 0; i < pop.size(); ++i) pop[i] = counts[i] / options.shots;
      }
      double comp_total = 0.0;
      for (std::size_t i : comp) comp_total += pop[i];
      double leaked = 0.0;
      for (std::size_t i = 0; i < pop.size(); ++i) {
        if (std::find(comp.begin(), comp.end(), i) == comp.end()) leaked += pop[i];
      }

      DepthAccumulator& a = acc[next];
      a.leak += leaked / (leaked + comp_total);
      double coherent_total = 0.0;
      for (std::size_t i : comp) coherent_total += std::norm(chi_final(i, 0));
      double cross = 0.0;
      double ideal_sq = 0.0;
      double noisy_sq = 0.0;
      double coherent_sq = 0.0;
      for (std::size_t k = 0; k < comp.size(); ++k) {
        const double r = coherent_total > 0.0 ? std::norm(chi_final(comp[k], 0)) / coherent_total : 1.0 / dq;
        coherent_sq += r * r;
        const double q = comp_total > 0.0 ? pop[comp[k]] / comp_total : 1.0 / dq;
        const double p = std::norm(psi_final(k, 0));
        cross += q * p;
        ideal_sq += p * p;
        noisy_sq += q * q;
      }
      a.xeb_num += dq * cross - 1.0;
      a.xeb_den += dq * ideal_sq - 1.0;
      a.var_noisy += noisy_sq / dq - 1.0 / (dq * dq);
      a.var_coherent += coherent_sq / dq - 1.0 / (dq * dq);
      ++next;
    }
  }

  DecayDataset out;
  out.depths = options.depths;
  out.n_circuits = options.n_circuits;
  out.seed = options.seed;
  for (const DepthAccumulator& a : acc) {
    if (!(a.xeb_den > 0.0) || !(a.var_coherent > 0.0)) throw Error("xeb_simulate: ideal distributions are uniform");
    out.alpha.push_back(a.xeb_num / a.xeb_den);
    out.sqrt_purity.push_back(std::sqrt(std::max(0.0, a.var_noisy / a.var_coherent)));
    out.leak_pop.push_back(a.leak / options.n_circuits);
  }
  return out;
}

namespace {

struct LinearFit {
  double a = 0.0;
  double b = 0.0;
  double ssr = 0.0;
};

LinearFit fit_for_p(const std::vector<int>& m, const std::vector<double>& y, double p) {
  const std::size_t n = m.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(p, m[i]);
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit f;
  if (sxx > 1e-300) f.a = sxy / sxx;
  f.b = my - f.a * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.a * x[i] + f.b);
    f.ssr += r * r;
  }
  return f;
}

void check_series(const std::vector<int>& m, const std::vector<double>& y) {
  if (m.size() != y.size()) throw FitError("fit_decay: m and y differ in length");
  if (m.size() < 3) throw FitError("fit_decay: need at least three points");
  for (double v : y) {
    if (!std::isfinite(v)) throw FitError("fit_decay: non-finite value");
  }
}

bool is_constant(const std::vector<double>& y) {
  const double scale = std::max(1.0, std::abs(y.front()));
  return std::all_of(y.begin(), y.end(), [&](double v) { return std::abs(v - y.front()) <= 1e-10 * scale; });
}

}  // namespace

FitResult fit_decay(const std::vector<int>& m, const std::vector<double>& y) {
  check_series(m, y);
  if (is_constant(y)) throw FitError("fit_decay: constant series has no decay");

  // Search u = ln(1 - p) on a grid, then polish with Brent between grid neighbours.
  constexpr int kGrid = 400;
  constexpr double kUlo = -23.0;  // 1 - p ~ 1e-10
  constexpr double kUhi = -1e-9;  // p ~ 1e-9
  auto ssr_u = [&](double u) { return fit_for_p(m, y, -std::expm1(u)).ssr; };
  int best = 0;
  double best_ssr = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double v = ssr_u(kUlo + (kUhi - kUlo) * i / kGrid);
    if (v < best_ssr) {
      best_ssr = v;
      best = i;
    }
  }
  const double lo = kUlo + (kUhi - kUlo) * std::max(0, best - 1) / kGrid;
  const double hi = kUlo + (kUhi - kUlo) * std::min(kGrid, best + 1) / kGrid;
  std::uintmax_t iters = 200;
  const auto [u, ssr] = boost::math::tools::brent_find_minima(ssr_u, lo, hi, 52, iters);
  double p = -std::expm1(u);
  LinearFit lf = fit_for_p(m, y, p);
  const LinearFit at_one = fit_for_p(m, y, 1.0);
  if (at_one.ssr < lf.ssr) {
    p = 1.0;
    lf = at_one;
  }
  FitResult r;
  r.a = lf.a;
  r.p = p;
  r.b = lf.b;
  r.residual = std::sqrt(lf.ssr / static_cast<double>(m.size()));
  (void)ssr;
  return r;
}

FitResult fit_decay_or_flat(const std::vector<int>& m, const std::vector<double>& y) {
  check_series(m, y);
  if (is_constant(y)) return FitResult{0.0, 1.0, y.front(), 0.0};
  return fit_decay(m, y);
}

double pauli_error(double p, int n_qubits) {
  if (n_qubits != 1 && n_qubits != 2) throw InvalidArgument("pauli_error: n_qubits must be 1 or 2");
  const double d2 = n_qubits == 1 ? 4.0 : 16.0;
  return (1.0 - p) * (d2 - 1.0) / d2;
}

double leakage_error(const FitResult& leak_fit, int n_qubits) {
  return -leak_fit.a * pauli_error(leak_fit.p, n_qubits);
}

double extract_gate_error(double r_cycle, double r_q1, double r_q2) {
  if (!(r_q1 < 1.0) || !(r_q2 < 1.0) || !(r_cycle < 1.0)) {
    throw InvalidArgument("extract_gate_error: rates must be below 1");
  }
  return 1.0 - (1.0 - r_cycle) / ((1.0 - r_q1) * (1.0 - r_q2));
}

double gate_fidelity(double r_p, int n_qubits) {
  if (n_qubits != 1 && n_qubits != 2) throw InvalidArgument("gate_fidelity: n_qubits must be 1 or 2");
  const double d = n_qubits == 1 ? 2.0 : 4.0;
  return 1.0 - r_p * d / (d + 1.0);
}

ErrorBudget budget_row(const std::string& gate, const BudgetRowInputs& in, int n_qubits) {
  ErrorBudget b;
  b.gate = gate;
  b.duration_ns = in.duration_ns;
  b.n_qubits = n_qubits;
  b.p_xeb = in.p_xeb;
  b.p_spb = in.p_spb;
  b.r_p_xeb = pauli_error(in.p_xeb, n_qubits);
  b.r_p_spb = pauli_error(in.p_spb, n_qubits);
  b.r_leak = in.r_leak;
  b.r_p_dec = b.r_p_spb - b.r_leak;
  b.r_p_ctrl = b.r_p_xeb - b.r_p_spb;
  b.fidelity = gate_fidelity(b.r_p_xeb, n_qubits);
  return b;
}

BudgetTable budget_from_inputs(const BudgetRowInputs& q1, const BudgetRowInputs& q2, const BudgetRowInputs& cycle) {
  BudgetTable t;
  t.q1 = budget_row("Q1-pi/2", q1, 1);
  t.q2 = budget_row("Q2-pi/2", q2, 1);
  t.cycle = budget_row("cycle-CZ", cycle, 2);
  ErrorBudget& cz = t.cz;
  cz.gate = "CZ";
  cz.n_qubits = 2;
  cz.duration_ns = cycle.duration_ns - std::max(q1.duration_ns, q2.duration_ns);
  cz.r_p_xeb = extract_gate_error(t.cycle.r_p_xeb, t.q1.r_p_xeb, t.q2.r_p_xeb);
  cz.r_p_spb = extract_gate_error(t.cycle.r_p_spb, t.q1.r_p_spb, t.q2.r_p_spb);
  cz.r_leak = extract_gate_error(t.cycle.r_leak, t.q1.r_leak, t.q2.r_leak);
  cz.r_p_dec = cz.r_p_spb - cz.r_leak;
  cz.r_p_ctrl = cz.r_p_xeb - cz.r_p_spb;
  cz.fidelity = gate_fidelity(cz.r_p_xeb, 2);
  return t;
}

BudgetTable build_budget(const BudgetFits& cycle, const BudgetFits& q1, const BudgetFits& q2,
                         const NoiseModel& slots) {
  auto inputs = [](const BudgetFits& f, int n, double duration) {
    return BudgetRowInputs{f.xeb.p, f.spb.p, leakage_error(f.leak, n), duration};
  };
  return budget_from_inputs(inputs(q1, 1, slots.t_single), inputs(q2, 1, slots.t_single),
                            inputs(cycle, 2, slots.t_single + slots.t_cz));
}

std::string budget_json(const BudgetTable& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ErrorBudget* b : {&table.q1, &table.q2, &table.cycle, &table.cz}) {
    nlohmann::ordered_json row;
    row["gate"] = b->gate;
    row["duration_ns"] = b->duration_ns;
    row["n_qubits"] = b->n_qubits;
    row["p_xeb"] = b->p_xeb ? nlohmann::ordered_json(*b->p_xeb) : nlohmann::ordered_json(nullptr);
    row["r_p_xeb"] = b->r_p_xeb;
    row["p_spb"] = b->p_spb ? nlohmann::ordered_json(*b->p_spb) : nlohmann::ordered_json(nullptr);
    row["r_p_spb"] = b->r_p_spb;
    row["r_leak"] = b->r_leak;
    row["r_p_dec"] = b->r_p_dec;
    row["r_p_ctrl"] = b->r_p_ctrl;
    row["fidelity"] = b->fidelity;
    rows.push_back(row);
  }
  return rows.dump(2) + "\n";
}

std::string budget_text(const BudgetTable& table) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %7s %8s %8s %8s %8s %8s %8s %8s %9s\n", "Gate", "T(ns)", "p_xeb",
                "r_p,xeb", "p_spb", "r_p,spb", "r_leak", "r_p,dec", "r_p,ctrl", "Fidelity");
  os << line;
  for (const ErrorBudget* b : {&table.q1, &table.q2, &table.cycle, &table.cz}) {
    std::snprintf(line, sizeof line, "%-10s %7.0f %8s %8s %8s %8s %8s %8s %8s %9s\n", b->gate.c_str(), b->duration_ns,
                  b->p_xeb ? pct(*b->p_xeb).c_str() : "", pct(b->r_p_xeb).c_str(),
                  b->p_spb ? pct(*b->p_spb).c_str() : "", pct(b->r_p_spb).c_str(), pct(b->r_leak).c_str(),
                  pct(b->r_p_dec).c_str(), pct(b->r_p_ctrl).c_str(), pct(b->fidelity).c_str());
    os << line;
  }
  return os.str();
}

BudgetExperiment run_budget_experiment(const CMatrix& gate, const NoiseModel& noise,
                                       const std::vector<int>& cycle_depths,
                                       const std::vector<int>& single_depths, int n_circuits, std::uint64_t seed,
                                       int shots) {
  BudgetExperiment e;
  auto run = [&](XebKind kind, const std::vector<int>& depths) {
    XebOptions o;
    o.kind = kind;
    o.depths = depths;
    o.n_circuits = n_circuits;
    o.seed = seed;
    o.shots = shots;
    return xeb_simulate(gate, noise, o);
  };
  auto fits = [](const DecayDataset& d) {
    return BudgetFits{fit_decay_or_flat(d.depths, d.alpha), fit_decay_or_flat(d.depths, d.sqrt_purity),
                      fit_decay_or_flat(d.depths, d.leak_pop)};
  };
  e.cycle = run(XebKind::kCycle, cycle_depths);
  e.q1 = run(XebKind::kSingleQ1, single_depths);
  e.q2 = run(XebKind::kSingleQ2, single_depths);
  e.cycle_fits = fits(e.cycle);
  e.q1_fits = fits(e.q1);
  e.q2_fits = fits(e.q2);
  e.table = build_budget(e.cycle_fits, e.q1_fits, e.q2_fits, noise);
  return e;
}

}  // namespace pcz
