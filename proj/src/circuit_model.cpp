#include "pcz/circuit_model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <sstream>

namespace pcz {
namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(name) + " must be positive and finite, got " + fmt_double(v));
  }
}

double asymmetry(double ia, double ib) { return std::abs(ia - ib) / (ia + ib); }

}  // namespace

void CircuitParams::validate() const {
  require_positive(c_qubit1, "c_qubit1");
  require_positive(c_qubit2, "c_qubit2");
  require_positive(c_coupler, "c_coupler");
  require_positive(c_qq, "c_qq");
  require_positive(c_qc1, "c_qc1");
  require_positive(c_qc2, "c_qc2");
  require_positive(ic_q1a, "ic_q1a");
  require_positive(ic_q1b, "ic_q1b");
  require_positive(ic_q2a, "ic_q2a");
  require_positive(ic_q2b, "ic_q2b");
  require_positive(ic_ca, "ic_ca");
  require_positive(ic_cb, "ic_cb");
}

double SpectralParams::fc_min() const { return fc_max * std::sqrt(d_coupler); }

void SpectralParams::validate() const {
  require_positive(f01_q1, "f01_q1");
  require_positive(f01_q2, "f01_q2");
  require_positive(fc_max, "fc_max");
  if (!(d_coupler >= 0.0 && d_coupler < 1.0)) {
    throw InvalidArgument("d_coupler must lie in [0, 1), got " + fmt_double(d_coupler));
  }
  if (fc_min() <= std::max(f01_q1, f01_q2)) {
    throw InvalidArgument("coupler minimum frequency " + fmt_double(fc_min()) +
                          " GHz does not exceed the qubit frequencies");
  }
}

TransmonSpectrum transmon_spectrum(double ej, double ec) {
  if (!(ej > 0.0) || !(ec > 0.0)) throw InvalidArgument("transmon_spectrum needs positive E_J and E_C");
  TransmonSpectrum out;
  out.f01 = std::sqrt(8.0 * ej * ec) - ec;
  out.eta = -ec;
  out.transmon_regime = ej / ec >= 20.0;
  return out;
}

double josephson_energy_ghz(double ic_na) {
  const double joules = ic_na * 1e-9 * physical::kFluxQuantum / kTwoPi;
  return joules / physical::kPlanck * 1e-9;
}

double charging_energy_ghz(double c_ff) {
  const double e = physical::kElementaryCharge;
  return e * e / (2.0 * c_ff * 1e-15) / physical::kPlanck * 1e-9;
}

JunctionEnergies junction_energies(const CircuitParams& p) {
  p.validate();
  JunctionEnergies out;
  out.qubit1 = {josephson_energy_ghz(p.ic_q1a) + josephson_energy_ghz(p.ic_q1b), asymmetry(p.ic_q1a, p.ic_q1b),
                charging_energy_ghz(p.c_qubit1 + p.c_qc1 + p.c_qq)};
  out.qubit2 = {josephson_energy_ghz(p.ic_q2a) + josephson_energy_ghz(p.ic_q2b), asymmetry(p.ic_q2a, p.ic_q2b),
                charging_energy_ghz(p.c_qubit2 + p.c_qc2 + p.c_qq)};
  out.coupler = {josephson_energy_ghz(p.ic_ca) + josephson_energy_ghz(p.ic_cb), asymmetry(p.ic_ca, p.ic_cb),
                 charging_energy_ghz(p.c_coupler + p.c_qc1 + p.c_qc2)};
  return out;
}

double ej_of_flux(double ej_max, double d, double phi) {
  const double c = std::cos(kPi * phi);
  const double s = std::sin(kPi * phi);
  return ej_max * std::sqrt(c * c + d * d * s * s);
}

double coupler_frequency(const SpectralParams& spectral, double phi) {
  // f ~ sqrt(E_J) with the charging correction folded into fc_max.
  return spectral.fc_max * std::sqrt(ej_of_flux(1.0, spectral.d_coupler, phi));
}

namespace {

void check_degeneracy(const SpectralParams& sp, double fc, double phi) {
  const double d1 = std::abs(sp.f01_q1 - fc) * 1e3;
  const double d2 = std::abs(sp.f01_q2 - fc) * 1e3;
  if (d1 <= kDegeneracyRatio * std::abs(sp.g_qc1) || d2 <= kDegeneracyRatio * std::abs(sp.g_qc2)) {
    throw DegeneracyError("coupler at " + fmt_double(fc) + " GHz (phi = " + fmt_double(phi) +
                          ") is degenerate with qubit frequencies " + fmt_double(sp.f01_q1) + " / " +
                          fmt_double(sp.f01_q2) + " GHz");
  }
}

}  // namespace

double effective_coupling(const SpectralParams& sp, double phi) {
  if (!std::isfinite(phi)) throw InvalidArgument("effective_coupling: non-finite flux");
  const double fc = coupler_frequency(sp, phi);
  check_degeneracy(sp, fc, phi);
  const double sum = 1.0 / (sp.f01_q1 - fc) + 1.0 / (sp.f01_q2 - fc) - 1.0 / (sp.f01_q1 + fc) -
                     1.0 / (sp.f01_q2 + fc);
  // MHz^2 / GHz -> MHz
  return sp.g_qq + 0.5 * sp.g_qc1 * sp.g_qc2 * sum * 1e-3;
}

QubitShift dispersive_shift(const SpectralParams& sp, double phi) {
  const double fc = coupler_frequency(sp, phi);
  check_degeneracy(sp, fc, phi);
  QubitShift s;
  s.q1_mhz = sp.g_qc1 * sp.g_qc1 * (1.0 / (sp.f01_q1 - fc) - 1.0 / (sp.f01_q1 + fc)) * 1e-3;
  s.q2_mhz = sp.g_qc2 * sp.g_qc2 * (1.0 / (sp.f01_q2 - fc) - 1.0 / (sp.f01_q2 + fc)) * 1e-3;
  return s;
}

SpectralParams spectral_from_circuit(const CircuitParams& p) {
  const JunctionEnergies je = junction_energies(p);
  const TransmonSpectrum q1 = transmon_spectrum(je.qubit1.ej_max, je.qubit1.ec);
  const TransmonSpectrum q2 = transmon_spectrum(je.qubit2.ej_max, je.qubit2.ec);
  const TransmonSpectrum c = transmon_spectrum(je.coupler.ej_max, je.coupler.ec);
  const double cs_q1 = p.c_qubit1 + p.c_qc1 + p.c_qq;
  const double cs_q2 = p.c_qubit2 + p.c_qc2 + p.c_qq;
  const double cs_c = p.c_coupler + p.c_qc1 + p.c_qc2;
  auto bare = [](double cc, double ca, double cb, double fa, double fb) {
    return 0.5 * cc / std::sqrt(ca * cb) * std::sqrt(fa * fb) * 1e3;  // MHz
  };
  SpectralParams out;
  out.f01_q1 = q1.f01;
  out.f01_q2 = q2.f01;
  out.eta_q1 = q1.eta;
  out.eta_q2 = q2.eta;
  out.fc_max = c.f01;
  out.d_coupler = je.coupler.d;
  out.g_qq = bare(p.c_qq, cs_q1, cs_q2, q1.f01, q2.f01);
  out.g_qc1 = bare(p.c_qc1, cs_q1, cs_c, q1.f01, c.f01);
  out.g_qc2 = bare(p.c_qc2, cs_q2, cs_c, q2.f01, c.f01);
  return out;
}

DeviceModel::DeviceModel(SpectralParams spectral, double flux_idle, Curve g_curve,
                         std::optional<ShiftCurve> shift)
    : spectral_(spectral), flux_idle_(flux_idle), g_curve_(std::move(g_curve)), shift_curve_(std::move(shift)) {
  if (!std::isfinite(flux_idle_)) throw InvalidArgument("flux_idle must be finite");
  if (shift_curve_) idle_shift_ = (*shift_curve_)(flux_idle_);
}

DeviceModel DeviceModel::from_spectral(const SpectralParams& spectral, double flux_idle) {
  spectral.validate();
  return DeviceModel(
      spectral, flux_idle, [spectral](double phi) { return effective_coupling(spectral, phi); },
      ShiftCurve([spectral](double phi) { return dispersive_shift(spectral, phi); }));
}

DeviceModel DeviceModel::with_curve(const SpectralParams& spectral, double flux_idle, Curve g_curve,
                                    std::optional<ShiftCurve> shift_curve) {
  if (!g_curve) throw InvalidArgument("DeviceModel::with_curve needs a coupling curve");
  return DeviceModel(spectral, flux_idle, std::move(g_curve), std::move(shift_curve));
}

DeviceModel DeviceModel::with_flux_idle(double flux_idle) const {
  return DeviceModel(spectral_, flux_idle, g_curve_, shift_curve_);
}

QubitShift DeviceModel::shift_from_idle(double phi) const {
  if (!shift_curve_) return {};
  const QubitShift s = (*shift_curve_)(phi);
  return {s.q1_mhz - idle_shift_.q1_mhz, s.q2_mhz - idle_shift_.q2_mhz};
}

std::vector<CouplingAnchor> measured_coupling_anchors() { return {{0.0, 11.0}, {0.5, -22.0}, {-0.35, 0.0}}; }

namespace {

std::vector<double> pack(const SpectralParams& sp, std::span<const CalibrationParam> free) {
  std::vector<double> x;
  for (CalibrationParam p : free) {
    switch (p) {
      case CalibrationParam::kGqq:
        x.push_back(sp.g_qq);
        break;
      case CalibrationParam::kCouplingScale:
        x.push_back(1.0);
        break;
      case CalibrationParam::kFcMax:
        x.push_back(sp.fc_max);
        break;
      case CalibrationParam::kDCoupler:
        x.push_back(sp.d_coupler);
        break;
    }
  }
  return x;
}

SpectralParams unpack(const SpectralParams& base, std::span<const CalibrationParam> free, std::span<const double> x) {
  SpectralParams sp = base;
  for (std::size_t i = 0; i < free.size(); ++i) {
    switch (free[i]) {
      case CalibrationParam::kGqq:
        sp.g_qq = x[i];
        break;
      case CalibrationParam::kCouplingScale:
        sp.g_qc1 = base.g_qc1 * x[i];
        sp.g_qc2 = base.g_qc2 * x[i];
        break;
      case CalibrationParam::kFcMax:
        sp.fc_max = x[i];
        break;
      case CalibrationParam::kDCoupler:
        sp.d_coupler = x[i];
        break;
    }
  }
  return sp;
}

// Residual vector, or nullopt when the candidate is unphysical or degenerate.
std::optional<Eigen::VectorXd> residuals(const SpectralParams& sp, std::span<const CouplingAnchor> anchors) {
  try {
    sp.validate();
    Eigen::VectorXd r(static_cast<Eigen::Index>(anchors.size()));
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      r[static_cast<Eigen::Index>(i)] = effective_coupling(sp, anchors[i].phi) - anchors[i].g_mhz;
    }
    return r;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

CalibrationResult calibrate_g_curve(std::span<const CouplingAnchor> anchors, const SpectralParams& initial,
                                    const CalibrationOptions& options) {
  const std::span<const CalibrationParam> free = options.free;
  if (free.empty()) throw InvalidArgument("calibrate_g_curve: no free parameters");
  if (anchors.size() < free.size()) {
    throw InvalidArgument("calibrate_g_curve: " + std::to_string(anchors.size()) + " anchors cannot determine " +
                          std::to_string(free.size()) + " parameters");
  }
  std::vector<double> x = pack(initial, free);
  auto r0 = residuals(initial, anchors);
  if (!r0) throw InvalidArgument("calibrate_g_curve: initial parameters are degenerate or invalid");

  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::VectorXd r = *r0;
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  int iter = 0;
  for (; iter < options.max_iters && r.cwiseAbs().maxCoeff() > 1e-9; ++iter) {
    Eigen::MatrixXd jac(r.size(), n);
    bool jac_ok = true;
    for (Eigen::Index j = 0; j < n && jac_ok; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[static_cast<std::size_t>(j)]));
      std::vector<double> xp = x;
      std::vector<double> xm = x;
      xp[static_cast<std::size_t>(j)] += h;
      xm[static_cast<std::size_t>(j)] -= h;
      auto rp = residuals(unpack(initial, free, xp), anchors);
      auto rm = residuals(unpack(initial, free, xm), anchors);
      if (!rp || !rm) {
        jac_ok = false;
        break;
      }
      jac.col(j) = (*rp - *rm) / (2.0 * h);
    }
    if (!jac_ok) break;

    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    bool improved = false;
    for (int attempt = 0; attempt < 30 && !improved; ++attempt) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::VectorXd step = a.ldlt().solve(-jtr);
      std::vector<double> xn = x;
      for (Eigen::Index j = 0; j < n; ++j) xn[static_cast<std::size_t>(j)] += step[j];
      auto rn = residuals(unpack(initial, free, xn), anchors);
      if (rn && rn->squaredNorm() < cost) {
        x = xn;
        r = *rn;
        cost = r.squaredNorm();
        lambda = std::max(lambda * 0.3, 1e-12);
        improved = true;
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved) break;
  }

  CalibrationResult result;
  result.params = unpack(initial, free, x);
  result.max_residual_mhz = r.cwiseAbs().maxCoeff();
  result.iterations = iter;
  if (result.max_residual_mhz > options.max_residual_mhz) {
    throw CalibrationError("calibrate_g_curve did not converge; best max residual " +
                               fmt_double(result.max_residual_mhz) + " MHz",
                           result.max_residual_mhz);
  }
  return result;
}

double find_decoupling_flux(const DeviceModel& model, double lo, double hi) {
  if (!(lo < hi)) throw InvalidArgument("find_decoupling_flux: empty bracket");
  const double glo = model.coupling(lo);
  const double ghi = model.coupling(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) {
    throw InvalidArgument("find_decoupling_flux: coupling does not change sign on [" + fmt_double(lo) + ", " +
                          fmt_double(hi) + "] (g = " + fmt_double(glo) + ", " + fmt_double(ghi) + " MHz)");
  }
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve([&](double phi) { return model.coupling(phi); }, lo, hi,
                                                       glo, ghi, boost::math::tools::eps_tolerance<double>(52),
                                                       max_iter);
  const double root = std::abs(model.coupling(a)) <= std::abs(model.coupling(b)) ? a : b;
  return root;
}

std::string_view transition_name(Transition t) {
  switch (t) {
    case Transition::kSwap01_10:
      return "01<->10";
    case Transition::kLeak11_02:
      return "11<->02";
    case Transition::kLeak11_20:
      return "11<->20";
  }
  return "?";
}

WorkingPointReport working_point_check(const DeviceModel& model, double f_target_ghz, int k_max,
                                       double drive_peak_mhz, Transition target) {
  if (target == Transition::kSwap01_10) {
    throw InvalidArgument("working_point_check: the drive target must be an |11> <-> |2x> transition");
  }
  const SpectralParams& sp = model.spectral();
  const double f10 = sp.f01_q1;
  const double f01 = sp.f01_q2;
  const double f11 = f10 + f01;
  const double f20 = 2.0 * f10 + sp.eta_q1;
  const double f02 = 2.0 * f01 + sp.eta_q2;

  WorkingPointReport report;
  report.target_mhz = f_target_ghz * 1e3;
  report.delta_mhz = std::abs(f10 - f01) * 1e3;
  const Transition leak = target == Transition::kLeak11_20 ? Transition::kLeak11_02 : Transition::kLeak11_20;
  report.delta_leak_mhz = (leak == Transition::kLeak11_02 ? std::abs(f11 - f02) : std::abs(f11 - f20)) * 1e3;

  const double warn_below = 10.0 * std::abs(drive_peak_mhz);
  for (int k = 0; k <= k_max; ++k) {
    for (auto [t, freq] : {std::pair{Transition::kSwap01_10, report.delta_mhz}, std::pair{leak, report.delta_leak_mhz}}) {
      CollisionMargin m;
      m.harmonic = k;
      m.transition = t;
      m.transition_mhz = freq;
      m.margin_mhz = std::abs(k * report.target_mhz - freq);
      m.warn = m.margin_mhz < warn_below;
      report.any_warning = report.any_warning || m.warn;
      if (k <= 1 && m.margin_mhz < kHardCollisionMhz) report.hard_collision = true;
      report.margins.push_back(m);
    }
  }
  return report;
}

}  // namespace pcz
