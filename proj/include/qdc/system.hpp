#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qdc/dressed.hpp"
#include "qdc/hilbert.hpp"
#include "qdc/phonon.hpp"
#include "qdc/steady_state.hpp"

namespace qdc {

/// Which operator's correlation defines the detected spectrum.
enum class SpectrumSource {
  YDipole,  // sigma_y = w_1 |G><Y| + w_2 |Y><XX| (side detection of the leaky QD emission)
  YCavity,  // a_y
  Both,     // sum of the two channel spectra with unit weights
  XDipole,  // sigma_{X-G}; diagnostic two-level reductions
};

std::string to_string(SpectrumSource source);
SpectrumSource parse_source(const std::string& name);

/// Bare QD energies. Excitons relative to the x-cavity w_c^x, biexciton relative to 2 w_c^x.
struct QdEnergies {
  double x_exciton = 990.0;
  double y_exciton = 965.0;
  double biexciton = 0.0;
};

struct Couplings {
  double g1x = 26.7;                             // X-G to x-cavity
  double g2x = 26.7 * std::sqrt(0.88 / 0.56);    // XX-X to x-cavity
  double g1y = 26.7;                             // Y-G to y-cavity
  double g2y = 26.7 * std::sqrt(0.88 / 0.56);    // XX-Y to y-cavity
};

/// Radiative (gamma), pure dephasing (gamma') and cavity loss rates, all in ueV.
struct Rates {
  double gamma_x_g = 0.56;
  double gamma_y_g = 0.56;
  double gamma_xx_x = 0.88;
  double gamma_xx_y = 0.88;
  double dephasing_x_g = 8.2;
  double dephasing_y_g = 8.2;
  double dephasing_xx_x = 8.2;
  double dephasing_xx_y = 8.2;
  double kappa_x = 74.0;
  double kappa_y = 132.0;
};

/// Exactly one of the three drive specifications may be set.
struct DriveConfig {
  std::optional<double> omega;                  // cavity drive amplitude (ueV)
  std::optional<std::complex<double>> eta1;     // direct Rabi-field override ...
  std::optional<std::complex<double>> eta2;     // ... (both or neither)
  std::optional<double> splitting;              // calibrate omega so the dressed splitting is this (ueV)
};

struct PhononConfig {
  bool enable = true;
  PhononParams params;
};

struct Numerics {
  int n_max_y = 2;
  double grid_span = 1400.0;  // grid covers [-span, +span] around w_L
  int grid_points = 1601;
  SteadyStateOptions steady_state;
};

struct SystemConfig {
  QdEnergies energies;
  double cavity_split = 320.0;    // w_c^x - w_c^y
  double laser_detuning = 0.0;    // w_L - w_c^x
  Couplings couplings;
  Rates rates;
  DriveConfig drive{std::nullopt, std::nullopt, std::nullopt, 80.0};
  PhononConfig phonon;
  Numerics numerics;
  SpectrumSource source = SpectrumSource::YDipole;
  bool normalize = true;
  bool include_coherent = false;
  bool dipole_weighted = true;  // weight sigma_y terms by sqrt(gamma) relative to Y-G; false gives unit weights

  void validate() const;
};

DetuningSet detunings(const SystemConfig& cfg);
double cavity_detuning_x(const SystemConfig& cfg);  // w_c^x - w_L
double cavity_detuning_y(const SystemConfig& cfg);  // w_c^y - w_L

/// Laser detuning that places w_L = w_XX / 2.
double two_photon_laser_detuning(const SystemConfig& cfg);

/// Cavity drive amplitude giving the (phonon-renormalized) splitting at two-photon resonance.
double omega_for_splitting(const SystemConfig& cfg, double splitting);

std::vector<double> omega_grid(const SystemConfig& cfg);

/// Projector dephasing rates (G, Y, X, XX) such that every driven or detected transition a-b
/// loses coherence exactly as L(sigma^dag sigma; gamma'_ab) would on an isolated two-level
/// system: rate_a + rate_b = gamma'_ab. Minimum-norm least-squares solution.
struct DephasingSolution {
  std::array<double, 4> projector_rates{};
  double residual = 0;
};
DephasingSolution solve_dephasing_rates(const Rates& rates);

/// Everything derived from a config: operators, renormalized drive, generator.
struct SystemModel {
  SystemConfig config;
  HilbertSpace space{0};
  DetuningSet detunings;
  DriveParams drive;          // bare effective drive (before <B> renormalization)
  double bracket_b_x = 1.0;   // <B> of transitions with exciton displacement
  double bracket_b_xx = 1.0;  // <B> of XX-X / XX-Y transitions
  DephasingSolution dephasing;
  std::shared_ptr<const PhononKernels> kernels;  // null when phonons are disabled
  MatrixXc hamiltonian;
  MatrixXc liouvillian;
};

SystemModel build_system(const SystemConfig& cfg);

/// H on QD (x) y-cavity after adiabatic elimination of the x-cavity.
MatrixXc build_reduced_hamiltonian(const SystemConfig& cfg);
MatrixXc assemble_liouvillian(const SystemConfig& cfg);

/// Emission operator (lowering) for the configured source; YDipole for Both.
MatrixXc source_operator(const HilbertSpace& space, SpectrumSource source, const Rates& rates = {},
                         bool dipole_weighted = false);

struct SolveDiagnostics {
  double trace_preservation = 0;      // ||Tr o L||_inf
  double hamiltonian_hermiticity = 0;
  double steady_state_residual = 0;
  double density_hermiticity = 0;     // before symmetrization
  double density_trace_error = 0;
  double density_min_eigenvalue = 0;
};

struct SpectrumResult {
  std::vector<double> omega;      // offsets from w_L (ueV), strictly increasing
  std::vector<double> intensity;
  std::string config_hash;
  bool phonons = false;
  SpectrumSource source = SpectrumSource::YDipole;
  double normalization = 1.0;     // factor applied to the raw spectrum
  SolveDiagnostics diagnostics;
};

SpectrumResult compute_spectrum(const SystemModel& model);
SpectrumResult compute_spectrum(const SystemConfig& cfg);

/// Same, evaluated on an explicit grid of offsets from w_L (strictly increasing).
SpectrumResult compute_spectrum(const SystemModel& model, std::vector<double> omega);

/// Unnormalized spectrum of an arbitrary emission operator for an assembled model.
SpectrumResult compute_spectrum_for(const SystemModel& model, const MatrixXc& lowering);
SpectrumResult compute_spectrum_for(const SystemModel& model, const MatrixXc& lowering, std::vector<double> omega);

}  // namespace qdc
