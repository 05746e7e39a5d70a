#include "qdc/system.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include <Eigen/QR>

#include "qdc/config_io.hpp"
#include "qdc/regression.hpp"
#include "qdc/superoperator.hpp"

namespace qdc {

std::string to_string(SpectrumSource source) {
  switch (source) {
    case SpectrumSource::YDipole: return "y-dipole";
    case SpectrumSource::YCavity: return "y-cavity";
    case SpectrumSource::Both: return "both";
    case SpectrumSource::XDipole: return "x-dipole";
  }
  return "?";
}

SpectrumSource parse_source(const std::string& name) {
  for (auto s : {SpectrumSource::YDipole, SpectrumSource::YCavity, SpectrumSource::Both, SpectrumSource::XDipole})
    if (to_string(s) == name) return s;
  throw ConfigError("unknown spectrum source '" + name + "' (expected y-dipole, y-cavity, both or x-dipole)");
}

void SystemConfig::validate() const {
  const std::array<std::pair<const char*, double>, 10> rate_list{{
      {"gamma_x_g", rates.gamma_x_g},
      {"gamma_y_g", rates.gamma_y_g},
      {"gamma_xx_x", rates.gamma_xx_x},
      {"gamma_xx_y", rates.gamma_xx_y},
      {"dephasing_x_g", rates.dephasing_x_g},
      {"dephasing_y_g", rates.dephasing_y_g},
      {"dephasing_xx_x", rates.dephasing_xx_x},
      {"dephasing_xx_y", rates.dephasing_xx_y},
      {"kappa_x", rates.kappa_x},
      {"kappa_y", rates.kappa_y},
  }};
  for (const auto& [name, value] : rate_list)
    if (!(value >= 0)) throw ConfigError(std::string("rates.") + name + " must be >= 0");
  if (numerics.n_max_y < 0) throw ConfigError("numerics.n_max_y must be >= 0");
  if ((couplings.g1y != 0 || couplings.g2y != 0) && numerics.n_max_y < 1)
    throw ConfigError("numerics.n_max_y must be >= 1 when a y-cavity coupling is nonzero");
  if (numerics.grid_points < 2) throw ConfigError("numerics.grid_points must be >= 2");
  if (!(numerics.grid_span > 0)) throw ConfigError("numerics.grid_span must be > 0");

  const bool has_eta = drive.eta1.has_value() || drive.eta2.has_value();
  if (drive.eta1.has_value() != drive.eta2.has_value())
    throw ConfigError("drive: eta1 and eta2 overrides must be given together");
  const int specs = int(drive.omega.has_value()) + int(has_eta) + int(drive.splitting.has_value());
  if (specs > 1) throw ConfigError("drive: give exactly one of omega, (eta1, eta2) or splitting");
  if (drive.splitting && *drive.splitting < 0) throw ConfigError("drive.splitting must be >= 0");
  if (phonon.enable) phonon.params.validate();
}

DetuningSet detunings(const SystemConfig& cfg) {
  DetuningSet d;
  d.delta2 = cfg.energies.y_exciton - cfg.laser_detuning;
  d.delta3 = cfg.energies.x_exciton - cfg.laser_detuning;
  d.delta4 = cfg.energies.biexciton - 2.0 * cfg.laser_detuning;
  return d;
}

double cavity_detuning_x(const SystemConfig& cfg) { return -cfg.laser_detuning; }
double cavity_detuning_y(const SystemConfig& cfg) { return -cfg.cavity_split - cfg.laser_detuning; }

double two_photon_laser_detuning(const SystemConfig& cfg) { return cfg.energies.biexciton / 2.0; }

namespace {

struct Renormalization {
  double x = 1.0;
  double xx = 1.0;
  std::shared_ptr<const PhononKernels> kernels;
};

Renormalization renormalization(const SystemConfig& cfg) {
  Renormalization r;
  if (!cfg.phonon.enable) return r;
  r.kernels = cached_phonon_kernels(cfg.phonon.params);
  r.x = r.kernels->bracket_b_scaled(1.0);
  r.xx = r.kernels->bracket_b_scaled(cfg.phonon.params.xx_scaling - 1.0);
  return r;
}

double omega_for_splitting_impl(const SystemConfig& cfg, double splitting, const Renormalization& r) {
  const double target = eta_squared_for_splitting(splitting, detunings(cfg).delta3);
  const double gx = std::pow(r.x * cfg.couplings.g1x, 2) + std::pow(r.xx * cfg.couplings.g2x, 2);
  if (gx == 0) throw ConfigError("drive.splitting needs a nonzero x-cavity coupling");
  const double alpha_abs = std::sqrt(target / gx);
  return alpha_abs * std::abs(std::complex<double>(cfg.rates.kappa_x / 2, cavity_detuning_x(cfg)));
}

DriveParams resolve_drive(const SystemConfig& cfg, const Renormalization& r) {
  const auto& d = cfg.drive;
  if (d.eta1) return DriveParams::direct(*d.eta1, *d.eta2);
  const double omega = d.splitting ? omega_for_splitting_impl(cfg, *d.splitting, r) : d.omega.value_or(0.0);
  return DriveParams::from_cavity(omega, cavity_detuning_x(cfg), cfg.rates.kappa_x, cfg.couplings.g1x,
                                  cfg.couplings.g2x);
}

}  // namespace

double omega_for_splitting(const SystemConfig& cfg, double splitting) {
  return omega_for_splitting_impl(cfg, splitting, renormalization(cfg));
}

std::vector<double> omega_grid(const SystemConfig& cfg) {
  const int n = cfg.numerics.grid_points;
  const double span = cfg.numerics.grid_span;
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) grid[static_cast<std::size_t>(k)] = -span + 2.0 * span * k / (n - 1);
  return grid;
}

DephasingSolution solve_dephasing_rates(const Rates& rates) {
  // Unknowns (G, Y, X, XX); one row per transition.
  Eigen::Matrix4d a;
  a << 0, 0, 1, 1,   // XX-X
       1, 0, 1, 0,   // X-G
       0, 1, 0, 1,   // XX-Y
       1, 1, 0, 0;   // Y-G
  const Eigen::Vector4d b(rates.dephasing_xx_x, rates.dephasing_x_g, rates.dephasing_xx_y, rates.dephasing_y_g);
  const Eigen::Vector4d x = a.completeOrthogonalDecomposition().solve(b);
  DephasingSolution out;
  for (int k = 0; k < 4; ++k) {
    if (x(k) < -1e-12 * std::max(1.0, b.maxCoeff()))
      throw ConfigError("dephasing rates cannot be realized with non-negative projector rates");
    out.projector_rates[static_cast<std::size_t>(k)] = std::max(0.0, x(k));
  }
  out.residual = (a * x - b).norm();
  return out;
}

SystemModel build_system(const SystemConfig& cfg) {
  cfg.validate();
  SystemModel m;
  m.config = cfg;
  m.space = HilbertSpace(cfg.numerics.n_max_y);
  m.detunings = detunings(cfg);

  const Renormalization r = renormalization(cfg);
  m.kernels = r.kernels;
  m.bracket_b_x = r.x;
  m.bracket_b_xx = r.xx;
  m.drive = resolve_drive(cfg, r);

  const HilbertSpace& s = m.space;
  using L = QdLevel;
  const MatrixXc a = embed_photon_annihilator(s);
  const MatrixXc up_x_g = embed_qd_transition(s, L::G, L::X);
  const MatrixXc up_y_g = embed_qd_transition(s, L::G, L::Y);
  const MatrixXc up_xx_x = embed_qd_transition(s, L::X, L::XX);
  const MatrixXc up_xx_y = embed_qd_transition(s, L::Y, L::XX);

  // Coherent processes P; the Hamiltonian carries <B> (P + P^dag), the bath sees P B_+ + h.c.
  const double xx_disp = cfg.phonon.params.xx_scaling - 1.0;
  const std::array<PhononCoupling, 4> processes{{
      {m.drive.eta1 * up_x_g, 1.0},
      {m.drive.eta2 * up_xx_x, xx_disp},
      {cfg.couplings.g1y * up_y_g * a, 1.0},
      {cfg.couplings.g2y * up_xx_y * a, xx_disp},
  }};

  const auto& d = m.detunings;
  MatrixXc h = d.delta4 * embed_qd_projector(s, L::XX) + d.delta3 * embed_qd_projector(s, L::X) +
               d.delta2 * embed_qd_projector(s, L::Y) + cavity_detuning_y(cfg) * MatrixXc(a.adjoint() * a);
  for (const auto& p : processes) {
    const double b = p.displacement == 1.0 ? r.x : r.xx;
    h += b * (p.raising + p.raising.adjoint());
  }
  m.hamiltonian = h;

  m.dephasing = solve_dephasing_rates(cfg.rates);
  std::vector<MatrixXc> dissipators;
  dissipators.push_back(lindblad_dissipator<double>(up_x_g.adjoint(), cfg.rates.gamma_x_g));
  dissipators.push_back(lindblad_dissipator<double>(up_y_g.adjoint(), cfg.rates.gamma_y_g));
  dissipators.push_back(lindblad_dissipator<double>(up_xx_x.adjoint(), cfg.rates.gamma_xx_x));
  dissipators.push_back(lindblad_dissipator<double>(up_xx_y.adjoint(), cfg.rates.gamma_xx_y));
  for (L level : kAllLevels) {
    const double rate = m.dephasing.projector_rates[static_cast<std::size_t>(level)];
    if (rate > 0) dissipators.push_back(lindblad_dissipator<double>(embed_qd_projector(s, level), rate));
  }
  if (s.n_max_y > 0) dissipators.push_back(lindblad_dissipator<double>(a, cfg.rates.kappa_y));
  if (m.kernels) dissipators.push_back(polaron_dissipator(h, processes, *m.kernels));

  m.liouvillian = liouvillian<double>(h, dissipators);
  return m;
}

MatrixXc build_reduced_hamiltonian(const SystemConfig& cfg) { return build_system(cfg).hamiltonian; }
MatrixXc assemble_liouvillian(const SystemConfig& cfg) { return build_system(cfg).liouvillian; }

MatrixXc source_operator(const HilbertSpace& space, SpectrumSource source, const Rates& rates,
                         bool dipole_weighted) {
  using L = QdLevel;
  double w_xx_y = 1.0;
  if (dipole_weighted && rates.gamma_y_g > 0) w_xx_y = std::sqrt(rates.gamma_xx_y / rates.gamma_y_g);
  switch (source) {
    case SpectrumSource::YCavity: return embed_photon_annihilator(space);
    case SpectrumSource::XDipole: return embed_qd_transition(space, L::X, L::G);
    case SpectrumSource::YDipole:
    case SpectrumSource::Both:
      return embed_qd_transition(space, L::Y, L::G) + w_xx_y * embed_qd_transition(space, L::XX, L::Y);
  }
  return {};
}

SpectrumResult compute_spectrum_for(const SystemModel& model, const MatrixXc& lowering) {
  return compute_spectrum_for(model, lowering, omega_grid(model.config));
}

SpectrumResult compute_spectrum_for(const SystemModel& model, const MatrixXc& lowering, std::vector<double> omega) {
  const auto& cfg = model.config;
  if (omega.empty() || !std::is_sorted(omega.begin(), omega.end(), std::less_equal<>{}))
    throw ConfigError("spectrum grid must be nonempty and strictly increasing");
  SpectrumResult out;
  out.omega = std::move(omega);
  out.config_hash = config_hash(cfg);
  out.phonons = model.kernels != nullptr;
  out.source = cfg.source;

  auto& diag = out.diagnostics;
  diag.trace_preservation = trace_preservation_error<double>(model.liouvillian);
  diag.hamiltonian_hermiticity = hermiticity_error(model.hamiltonian);

  const auto ss = solve_steady_state<double>(model.liouvillian, cfg.numerics.steady_state);
  diag.steady_state_residual = ss.residual;
  diag.density_hermiticity = ss.raw_hermiticity_error;
  const auto dd = diagnose_density<double>(ss.rho);
  diag.density_trace_error = dd.trace_error;
  diag.density_min_eigenvalue = dd.min_eigenvalue;

  RegressionOptions ropts;
  ropts.include_coherent = cfg.include_coherent;
  const MatrixXc raising = lowering.adjoint();
  out.intensity = RegressionSpectrum<double>(model.liouvillian, lowering, raising, ss.rho, ropts)
                      .evaluate(std::span<const double>(out.omega));
  return out;
}

SpectrumResult compute_spectrum(const SystemModel& model) { return compute_spectrum(model, omega_grid(model.config)); }

SpectrumResult compute_spectrum(const SystemModel& model, std::vector<double> omega) {
  const auto& cfg = model.config;
  const MatrixXc lowering = source_operator(model.space, cfg.source, cfg.rates, cfg.dipole_weighted);
  SpectrumResult out = compute_spectrum_for(model, lowering, omega);
  if (cfg.source == SpectrumSource::Both && model.space.n_max_y > 0) {
    const auto cavity =
        compute_spectrum_for(model, source_operator(model.space, SpectrumSource::YCavity), std::move(omega));
    for (std::size_t k = 0; k < out.intensity.size(); ++k) out.intensity[k] += cavity.intensity[k];
  }
  if (cfg.normalize) {
    const double peak = *std::max_element(out.intensity.begin(), out.intensity.end());
    if (peak > 1e-14) {
      out.normalization = 1.0 / peak;
      for (double& v : out.intensity) v *= out.normalization;
    }
  }
  return out;
}

SpectrumResult compute_spectrum(const SystemConfig& cfg) { return compute_spectrum(build_system(cfg)); }

}  // namespace qdc
