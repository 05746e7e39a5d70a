#pragma once

// Unit conventions used throughout the library:
//   hbar = 1, energies and rates in micro-eV, times in 1/micro-eV.
//   1 / micro-eV  ~=  0.658 ns.

namespace qdc::units {

inline constexpr double kHbarUeVps = 658.211956949;      // hbar in ueV * ps
inline constexpr double kPlanckUeVns = 4.135667696;      // h in ueV * ns
inline constexpr double kBoltzmannUeVperK = 86.17333262;  // k_B in ueV / K

/// Time in picoseconds to internal units (1/ueV).
constexpr double ps_to_internal(double t_ps) { return t_ps / kHbarUeVps; }
constexpr double internal_to_ps(double t) { return t * kHbarUeVps; }

/// Energy (ueV) to ordinary frequency nu = E/h in GHz.
constexpr double ueV_to_GHz(double energy_ueV) { return energy_ueV / kPlanckUeVns; }
constexpr double GHz_to_ueV(double nu_GHz) { return nu_GHz * kPlanckUeVns; }

/// Thermal energy k_B T in ueV.
constexpr double thermal_energy(double kelvin) { return kBoltzmannUeVperK * kelvin; }

/// Cavity linewidth (FWHM, ueV) from the quality factor: kappa = E / Q.
double kappa_from_quality(double quality, double mode_energy_eV);

/// Coupling constant given in ps^2 (J(w) = alpha w^3 ..., w in 1/ps) converted to ueV^-2.
constexpr double ps2_to_internal(double alpha_ps2) { return alpha_ps2 / (kHbarUeVps * kHbarUeVps); }

}  // namespace qdc::units
