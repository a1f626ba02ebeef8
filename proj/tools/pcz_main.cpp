// pcz: command-line front end. One subcommand per experiment; every numerical
// knob lives in the JSON config, flags only choose paths and seeds.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "pcz/benchmark.hpp"
#include "pcz/config.hpp"
#include "pcz/csv.hpp"
#include "pcz/optimizer.hpp"

namespace fs = std::filesystem;
using namespace pcz;

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::string scan_kind = "swap";
};

struct Run {
  Json root;
  fs::path out;
  std::optional<std::uint64_t> seed;

  Json block(const char* name) const { return root.value(name, Json::object()); }
  void write(const std::string& name, const std::string& content) const { write_file_atomic(out / name, content); }
};

Run load(const Options& o) {
  Run r;
  r.root = read_json_file(o.config);
  if (!r.root.is_object()) throw ConfigError("config: top level must be an object");
  const std::set<std::string> known = {"device", "pulse", "gcurve", "scan", "optimizer", "sweep", "noise", "xeb",
                                       "budget"};
  for (const auto& [key, value] : r.root.items()) {
    if (!known.contains(key)) throw ConfigError("config: unknown block '" + key + "'");
  }
  r.out = o.out;
  fs::create_directories(r.out);
  r.seed = o.seed;
  return r;
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

Json pulse_json(const PulseParams& p) {
  return Json{{"lambda", p.lambda},       {"amplitude_scale", p.amplitude_scale}, {"f_carrier", p.f_carrier},
              {"phase", p.phase},         {"t_active", p.t_active},               {"t_pad", p.t_pad},
              {"sample_dt", p.sample_dt}};
}

Json metrics_json(const GateMetrics& m) {
  return Json{{"control_phase", m.control_phase}, {"theta_z1", m.theta_z1},         {"theta_z2", m.theta_z2},
              {"leakage", m.leakage},             {"swap_error", m.swap_error},     {"avg_fidelity", m.avg_fidelity},
              {"coherent_error", m.coherent_error}};
}

Json working_point_json(const WorkingPointReport& w) {
  Json margins = Json::array();
  for (const CollisionMargin& m : w.margins) {
    margins.push_back({{"harmonic", m.harmonic},
                       {"transition", std::string(transition_name(m.transition))},
                       {"transition_mhz", m.transition_mhz},
                       {"margin_mhz", m.margin_mhz},
                       {"warn", m.warn}});
  }
  return Json{{"target_mhz", w.target_mhz},
              {"delta_mhz", w.delta_mhz},
              {"delta_leak_mhz", w.delta_leak_mhz},
              {"any_warning", w.any_warning},
              {"hard_collision", w.hard_collision},
              {"margins", margins}};
}

OptimizerConfig optimizer_config(const Run& r) {
  OptimizerConfig cfg = optimizer_from_json(r.block("optimizer"));
  cfg.initial = pulse_from_json(r.block("pulse"), cfg.initial);
  if (r.seed) cfg.seed = *r.seed;
  return cfg;
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& block) {
  if (!j.is_object()) throw ConfigError(block + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError(block + ": unknown key '" + key + "'");
  }
}

void cmd_gcurve(const Run& r) {
  const DeviceSetup dev = device_from_json(r.block("device"));
  const Json g = r.block("gcurve");
  reject_unknown(g, {"phi"}, "gcurve");
  const std::vector<double> phi = g.contains("phi") ? grid_from_json(g.at("phi")) : linspace(-0.5, 0.5, 501);
  CsvTable t({"phi", "g_mhz"});
  for (double p : phi) t.add_row({p, dev.model.coupling(p)});
  r.write("gcurve.csv", t.text());
}

void cmd_pulse(const Run& r) {
  const DeviceSetup dev = device_from_json(r.block("device"));
  const PulseParams p = pulse_from_json(r.block("pulse"));
  p.validate();
  const TimeSeries flux = flux_pulse(p);
  const TimeSeries g = coupling_series(dev.model, flux);
  CsvTable f({"t_ns", "flux"});
  CsvTable c({"t_ns", "g_mhz"});
  for (std::size_t i = 0; i < flux.size(); ++i) {
    f.add_row({flux.t[i], flux.values[i]});
    c.add_row({g.t[i], g.values[i]});
  }
  CsvTable s({"freq_ghz", "magnitude", "amplitude"});
  for (const SpectralLine& line : spectrum(g)) s.add_row({line.freq_ghz, line.magnitude, line.amplitude});
  r.write("pulse_flux.csv", f.text());
  r.write("pulse_coupling.csv", c.text());
  r.write("pulse_spectrum.csv", s.text());
}

void cmd_scan(const Run& r, const std::string& kind) {
  if (kind != "swap" && kind != "phase") throw ConfigError("scan: --kind must be swap or phase");
  const DeviceSetup dev = device_from_json(r.block("device"));
  const PulseParams p = pulse_from_json(r.block("pulse"));
  const Json s = r.block("scan");
  reject_unknown(s, {"amplitude", "detuning_mhz", "include_shift"}, "scan");
  if (!s.contains("amplitude") || !s.contains("detuning_mhz")) {
    throw ConfigError("scan: 'amplitude' and 'detuning_mhz' grids are required");
  }
  ScanOptions opts;
  opts.include_shift = s.value("include_shift", false);
  const std::vector<double> amps = grid_from_json(s.at("amplitude"));
  const std::vector<double> det = grid_from_json(s.at("detuning_mhz"));
  const ScanResult res = kind == "swap" ? swap_scan(dev.model, p, amps, det, opts) : phase_scan(dev.model, p, amps, det, opts);

  // Matrix layout: first row holds the averaged amplitudes, first column the detuning.
  std::string text = "detuning_mhz";
  for (double x : res.x) text += "," + format_double(x);
  text += '\n';
  for (std::size_t iy = 0; iy < res.y.size(); ++iy) {
    text += format_double(res.y[iy]);
    for (std::size_t ix = 0; ix < res.x.size(); ++ix) text += "," + format_double(res.at(iy, ix));
    text += '\n';
  }
  r.write("scan_" + kind + ".csv", text);
}

void cmd_optimize(const Run& r) {
  const DeviceSetup dev = device_from_json(r.block("device"));
  const OptimizerConfig cfg = optimizer_config(r);
  const OptimizeResult res = optimize_cz(dev.model, cfg.initial.t_active, cfg);

  std::vector<std::string> header = {"iteration", "best_cost"};
  for (PulseParam p : cfg.free_params) header.emplace_back(pulse_param_name(p));
  CsvTable trace(header);
  for (const TraceEntry& e : res.trace.entries) {
    std::vector<double> row = {static_cast<double>(e.iteration), e.best_cost};
    row.insert(row.end(), e.params.begin(), e.params.end());
    trace.add_row(row);
  }
  Json metrics = metrics_json(res.metrics);
  metrics["initial_cost"] = res.trace.initial_cost;
  metrics["evaluations"] = res.trace.evaluations;
  metrics["flux_idle"] = dev.flux_idle;
  metrics["working_point"] = working_point_json(res.working_point);
  r.write("optimized_pulse.json", json_text(pulse_json(res.pulse)));
  r.write("trace.csv", trace.text());
  r.write("metrics.json", json_text(metrics));
}

void cmd_sweep_delta(const Run& r) {
  const Json s = r.block("sweep");
  const DeviceSetup dev = device_from_json(r.block("device"));
  DeltaFamily family = family_from_json(s);
  family.base = dev.spectral;
  if (!s.contains("deltas_mhz")) throw ConfigError("sweep: 'deltas_mhz' is required");
  const std::vector<double> deltas = grid_from_json(s.at("deltas_mhz"));
  const OptimizerConfig cfg = optimizer_config(r);
  const double t_active = s.value("t_active", cfg.initial.t_active);
  const std::vector<DeltaSweepPoint> pts = delta_sweep(family, deltas, t_active, cfg);

  CsvTable t({"delta_mhz", "target_mhz", "coherent_error", "leakage", "swap_error", "control_phase"});
  for (const DeltaSweepPoint& p : pts) {
    t.add_row({p.delta_mhz, p.target_mhz, p.coherent_error, p.metrics.leakage, p.metrics.swap_error,
               p.metrics.control_phase});
  }
  r.write("sweep_delta.csv", t.text());

  const auto [lo, hi] = std::minmax_element(deltas.begin(), deltas.end());
  std::string text = "delta_mhz,harmonic,transition\n";
  for (const PredictedCollision& pc : predict_collisions(family, *lo, *hi, cfg.collision_harmonics)) {
    text += format_double(pc.delta_mhz) + "," + std::to_string(pc.harmonic) + "," +
            std::string(transition_name(pc.transition)) + "\n";
  }
  r.write("collisions.csv", text);
}

CMatrix xeb_gate(const Run& r, const std::string& source) {
  if (source == "ideal") return ideal_cz_subspace();
  const DeviceSetup dev = device_from_json(r.block("device"));
  if (source == "pulse") {
    const PulseParams p = pulse_from_json(r.block("pulse"));
    return with_virtual_z(interaction_frame(evolve(dev.model, p), dev.model));
  }
  if (source == "optimize") {
    const OptimizerConfig cfg = optimizer_config(r);
    const OptimizeResult res = optimize_cz(dev.model, cfg.initial.t_active, cfg);
    return with_virtual_z(interaction_frame(evolve(dev.model, res.pulse), dev.model));
  }
  throw ConfigError("xeb.gate: expected 'ideal', 'pulse' or 'optimize'");
}

void cmd_xeb(const Run& r) {
  const Json x = r.block("xeb");
  reject_unknown(x, {"cycle_depths", "single_depths", "n_circuits", "shots", "seed", "gate"}, "xeb");
  const NoiseModel noise = noise_from_json(r.block("noise"));
  const std::vector<int> cycle_depths =
      x.value("cycle_depths", std::vector<int>{1, 5, 10, 20, 30, 50, 70, 100, 140, 200});
  const std::vector<int> single_depths =
      x.value("single_depths", std::vector<int>{1, 10, 25, 50, 100, 150, 200, 300, 400});
  const std::uint64_t seed = r.seed.value_or(x.value("seed", std::uint64_t{0}));
  const CMatrix gate = xeb_gate(r, x.value("gate", std::string("ideal")));
  const BudgetExperiment e = run_budget_experiment(gate, noise, cycle_depths, single_depths,
                                                   x.value("n_circuits", 30), seed, x.value("shots", 0));

  auto decay_csv = [](const DecayDataset& d) {
    CsvTable t({"m", "alpha", "sqrt_purity", "leak_pop"});
    for (std::size_t i = 0; i < d.depths.size(); ++i) {
      t.add_row({static_cast<double>(d.depths[i]), d.alpha[i], d.sqrt_purity[i], d.leak_pop[i]});
    }
    return t.text();
  };
  auto fit_json = [](const FitResult& f) {
    return Json{{"a", f.a}, {"p", f.p}, {"b", f.b}, {"residual", f.residual}};
  };
  auto fits_json = [&](const BudgetFits& f) {
    return Json{{"xeb", fit_json(f.xeb)}, {"spb", fit_json(f.spb)}, {"leak", fit_json(f.leak)}};
  };
  r.write("xeb_cycle.csv", decay_csv(e.cycle));
  r.write("xeb_q1.csv", decay_csv(e.q1));
  r.write("xeb_q2.csv", decay_csv(e.q2));
  r.write("fits.json",
          json_text({{"cycle", fits_json(e.cycle_fits)}, {"q1", fits_json(e.q1_fits)}, {"q2", fits_json(e.q2_fits)}}));
  r.write("budget.json", budget_json(e.table));
  r.write("budget.txt", budget_text(e.table));
}

void cmd_budget(const Run& r) {
  const Json b = r.block("budget");
  reject_unknown(b, {"q1", "q2", "cycle"}, "budget");
  auto row = [&](const char* name, double duration) {
    if (!b.contains(name)) throw ConfigError(std::string("budget: missing row '") + name + "'");
    const Json& j = b.at(name);
    reject_unknown(j, {"p_xeb", "p_spb", "r_leak", "duration_ns"}, std::string("budget.") + name);
    BudgetRowInputs in;
    in.p_xeb = j.at("p_xeb").get<double>();
    in.p_spb = j.at("p_spb").get<double>();
    in.r_leak = j.value("r_leak", 0.0);
    in.duration_ns = j.value("duration_ns", duration);
    return in;
  };
  const BudgetTable t = budget_from_inputs(row("q1", 50.0), row("q2", 50.0), row("cycle", 156.0));
  r.write("budget.json", budget_json(t));
  r.write("budget.txt", budget_text(t));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric CZ gate simulator and optimizer"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "output directory");
  app.add_option("--seed", o.seed, "override the configured seed");

  auto* gcurve = app.add_subcommand("gcurve", "coupling versus coupler flux");
  auto* pulse = app.add_subcommand("pulse", "flux pulse, coupling series and spectrum");
  auto* scan = app.add_subcommand("scan", "swap or phase map over amplitude and detuning");
  scan->add_option("--kind", o.scan_kind, "swap or phase")->check(CLI::IsMember({"swap", "phase"}));
  auto* optimize = app.add_subcommand("optimize", "Nelder-Mead CZ pulse optimisation");
  auto* sweep = app.add_subcommand("sweep-delta", "optimised error versus qubit detuning");
  auto* xeb = app.add_subcommand("xeb", "simulated XEB/SPB decays and error budget");
  auto* budget = app.add_subcommand("budget", "error budget from measured decay constants");

  CLI11_PARSE(app, argc, argv);

  try {
    const Run r = load(o);
    if (*gcurve) cmd_gcurve(r);
    if (*pulse) cmd_pulse(r);
    if (*scan) cmd_scan(r, o.scan_kind);
    if (*optimize) cmd_optimize(r);
    if (*sweep) cmd_sweep_delta(r);
    if (*xeb) cmd_xeb(r);
    if (*budget) cmd_budget(r);
  } catch (const pcz::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
