// Command-line front end: dressed-state tables, spectra, sweeps and the invariant check.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdc/config_io.hpp"
#include "qdc/dressed.hpp"
#include "qdc/export.hpp"
#include "qdc/peaks.hpp"
#include "qdc/sweep.hpp"
#include "qdc/system.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  std::string format = "csv";
  bool render = false;
  std::string phonons;  // empty: keep config
  int grid = 0;         // 0: keep config
  int threads = 0;      // 0: hardware concurrency
};

struct Inputs {
  qdc::SystemConfig config;
  qdc::SweepSettings sweep;
  qdc::ExportFormat format = qdc::ExportFormat::Csv;
  int threads = 1;
  fs::path out;
};

Inputs resolve(const Options& o) {
  Inputs in;
  if (!o.config_path.empty()) {
    in.config = qdc::load_config(o.config_path);
    in.sweep = qdc::load_sweep_settings(o.config_path);
  }
  if (o.phonons == "on") in.config.phonon.enable = true;
  if (o.phonons == "off") in.config.phonon.enable = false;
  if (o.grid != 0) {
    if (o.grid < 2) throw qdc::ConfigError("--grid must be >= 2");
    in.config.numerics.grid_points = o.grid;
  }
  in.config.validate();
  in.format = qdc::parse_format(o.format);
  in.threads = o.threads > 0 ? o.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  in.out = o.out_dir;
  return in;
}

void print_peaks(const qdc::PeakReport& r) {
  std::printf("peaks (%zu):", r.count());
  for (const auto& p : r.peaks) std::printf(" %.1f", p.position);
  std::printf("\n");
  auto list = [](const char* name, const std::vector<double>& v) {
    std::printf("%s splittings:", name);
    for (double x : v) std::printf(" %.1f", x);
    std::printf("\n");
  };
  list("x-side", r.x_side_splittings);
  list("xx-side", r.xx_side_splittings);
}

int cmd_dressed(const Inputs& in) {
  const qdc::SystemModel model = qdc::build_system(in.config);
  const auto eff = qdc::DriveParams::direct(model.drive.eta1 * model.bracket_b_x, model.drive.eta2 * model.bracket_b_xx);
  const auto sol = qdc::dressed_eigenvalues(model.detunings, eff);
  const auto split = qdc::splitting_formulas(model.detunings, eff);
  const auto& c = in.config.couplings;

  json lines = json::array();
  for (const auto& l : sol.lines)
    lines.push_back({{"label", l.label}, {"offset", l.offset}, {"weight", l.weight}, {"dressed_state", l.dressed_state}});
  json j{{"detunings", {{"delta2", model.detunings.delta2}, {"delta3", model.detunings.delta3},
                        {"delta4", model.detunings.delta4}}},
         {"omega", model.drive.omega},
         {"alpha_abs2", std::norm(model.drive.alpha)},
         {"eta1", {eff.eta1.real(), eff.eta1.imag()}},
         {"eta2", {eff.eta2.real(), eff.eta2.imag()}},
         {"bracket_b", {model.bracket_b_x, model.bracket_b_xx}},
         {"eigenvalues", sol.eigenvalues},
         {"splitting_exact", split.exact},
         {"lines", lines}};
  if (split.approx) j["splitting_approx"] = *split.approx;
  if (c.g1x != 0 || c.g2x != 0)
    j["photon_number"] = qdc::photon_number_for_splitting(split.exact, model.detunings.delta3, c.g1x, c.g2x);

  fs::path path;
  if (in.format == qdc::ExportFormat::Json) {
    path = in.out / "dressed.json";
    qdc::write_text_file(path, j.dump(2) + "\n");
  } else {
    std::string text = "label,offset_ueV,weight,dressed_state\n";
    for (const auto& l : sol.lines) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%d\n", l.label.c_str(), l.offset, l.weight, l.dressed_state);
      text += buf;
    }
    path = in.out / "dressed.csv";
    qdc::write_text_file(path, text);
    qdc::write_text_file(in.out / "dressed.meta.json", j.dump(2) + "\n");
  }
  std::printf("eigenvalues: %.3f %.3f %.3f %.3f\n", sol.eigenvalues[0], sol.eigenvalues[1], sol.eigenvalues[2],
              sol.eigenvalues[3]);
  for (const auto& l : sol.lines) std::printf("%s %9.2f ueV  weight %.3f\n", l.label.c_str(), l.offset, l.weight);
  std::printf("splitting %.3f ueV, cavity drive omega %.3f ueV\nwrote %s\n", split.exact, model.drive.omega,
              path.c_str());
  return 0;
}

int cmd_spectrum(const Inputs& in) {
  const auto spec = qdc::compute_spectrum(in.config);
  const auto path = qdc::export_spectrum(spec, in.config, in.out / "spectrum", in.format);
  print_peaks(qdc::extract_peaks(spec));
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

void write_map(const Inputs& in, const qdc::SweepMap& map, const std::string& stem, bool render) {
  const auto files = qdc::export_map(map, in.config, in.out / stem, in.format);
  if (render) qdc::write_heatmap_svg(map, in.out / (stem + ".svg"));
  std::printf("%zu rows x %zu columns; wrote %s%s\n", map.axis1.size(), map.axis2.size(), files.front().c_str(),
              render ? " and heatmap" : "");
}

int cmd_power_sweep(const Inputs& in, bool render) {
  const auto axis = qdc::power_axis(in.config, in.sweep.max_splitting, in.sweep.power_points);
  const auto map = qdc::power_sweep(in.config, axis, {in.threads, in.sweep.normalization});
  write_map(in, map, "power_sweep", render);
  return 0;
}

int cmd_detuning_sweep(const Inputs& in, bool render) {
  qdc::SystemConfig at_resonance = in.config;
  at_resonance.laser_detuning = 0;
  const double omega = qdc::omega_for_splitting(at_resonance, in.sweep.zero_detuning_splitting);
  std::printf("cavity drive omega %.3f ueV (splitting %.1f ueV at zero detuning)\n", omega,
              in.sweep.zero_detuning_splitting);
  const auto axis = qdc::detuning_axis(in.sweep.detuning_span, in.sweep.detuning_points);
  const auto map = qdc::detuning_sweep(in.config, omega, axis, {in.threads, in.sweep.normalization});
  write_map(in, map, "detuning_sweep", render);
  return 0;
}

int cmd_phonon_compare(const Inputs& in) {
  const auto cmp = qdc::phonon_comparison(in.config);
  qdc::export_spectrum(cmp.with_phonons, cmp.with_config, in.out / "spectrum_phonons_on", in.format);
  qdc::export_spectrum(cmp.without_phonons, cmp.without_config, in.out / "spectrum_phonons_off", in.format);
  for (const auto* s : {&cmp.with_phonons, &cmp.without_phonons}) {
    const double left = qdc::integrate_window(*s, s->omega.front(), 0.0);
    const double right = qdc::integrate_window(*s, 0.0, s->omega.back());
    std::printf("phonons %-3s: left %.4g  right %.4g  left/right %.3f\n", s->phonons ? "on" : "off", left, right,
                left / right);
  }
  std::printf("wrote %s\n", (in.out / "spectrum_phonons_on").c_str());
  return 0;
}

// Invariant suite on the configured model; exit 3 if anything is out of tolerance.
int cmd_check(const Inputs& in) {
  bool ok = true;
  auto report = [&](const char* name, bool pass, double value, double limit) {
    ok = ok && pass;
    std::printf("[%s] %-32s %.3e (limit %.1e)\n", pass ? "PASS" : "FAIL", name, value, limit);
  };
  const auto model = qdc::build_system(in.config);
  const auto spec = qdc::compute_spectrum(model);
  const auto& d = spec.diagnostics;
  report("trace preservation", d.trace_preservation < 1e-9, d.trace_preservation, 1e-9);
  report("hamiltonian hermiticity", d.hamiltonian_hermiticity < 1e-9, d.hamiltonian_hermiticity, 1e-9);
  report("steady-state residual", d.steady_state_residual < 1e-9, d.steady_state_residual, 1e-9);
  report("density trace error", d.density_trace_error < 1e-9, d.density_trace_error, 1e-9);
  report("density hermiticity", d.density_hermiticity < 1e-9, d.density_hermiticity, 1e-9);
  report("density min eigenvalue", d.density_min_eigenvalue >= -1e-8, d.density_min_eigenvalue, -1e-8);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-300.0, 300.0);
  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    const qdc::DetuningSet det{u(rng), u(rng), 0.0};
    const auto drive = qdc::DriveParams::direct({u(rng), u(rng)}, {u(rng), u(rng)});
    const auto closed = qdc::dressed_eigenvalues(det, drive);
    Eigen::SelfAdjointEigenSolver<qdc::Matrix4c> es(qdc::build_atom_hamiltonian(det, drive));
    std::vector<double> a(closed.eigenvalues.begin(), closed.eigenvalues.end());
    std::vector<double> b(es.eigenvalues().data(), es.eigenvalues().data() + 4);
    std::sort(a.begin(), a.end());
    for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  report("dressed eigenvalue oracle", worst < 1e-10, worst, 1e-10);
  return ok ? 0 : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherently driven quantum-dot biexciton cascade in a bimodal cavity"};
  app.set_version_flag("--version", qdc::tool_version());
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--config", o.config_path, "JSON config file (defaults apply to missing keys)")->check(CLI::ExistingFile);
  app.add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  app.add_option("--format", o.format, "Data format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_flag("--render", o.render, "Also write an SVG heatmap for sweeps");
  app.add_option("--phonons", o.phonons, "Override phonon.enable")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--grid", o.grid, "Number of emission-grid points");
  app.add_option("--threads", o.threads, "Worker threads for sweeps (0: all cores)");

  auto* dressed = app.add_subcommand("dressed", "Dressed eigenvalues, transition catalog and splitting formulas");
  auto* spectrum = app.add_subcommand("spectrum", "Emission spectrum for one config");
  auto* power = app.add_subcommand("power-sweep", "Spectra versus cavity drive amplitude");
  auto* detuning = app.add_subcommand("detuning-sweep", "Spectra versus laser-cavity detuning");
  auto* compare = app.add_subcommand("phonon-compare", "Same config with and without phonons");
  auto* check = app.add_subcommand("check", "Solver invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const Inputs in = resolve(o);
    if (*dressed) return cmd_dressed(in);
    if (*spectrum) return cmd_spectrum(in);
    if (*power) return cmd_power_sweep(in, o.render);
    if (*detuning) return cmd_detuning_sweep(in, o.render);
    if (*compare) return cmd_phonon_compare(in);
    if (*check) return cmd_check(in);
  } catch (const qdc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qdc::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qdc::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}
