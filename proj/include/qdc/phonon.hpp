#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "qdc/hilbert.hpp"

namespace qdc {

/// Acoustic-phonon bath with super-Ohmic spectral density J(w) = alpha_p w^3 exp(-w^2 / 2 w_b^2).
struct PhononParams {
  double alpha_p = 0.06;       // exciton-phonon coupling (ps^2)
  double omega_b = 1000.0;     // cutoff energy (ueV)
  double temperature = 6.8;    // K
  double xx_scaling = 2.0;     // biexciton coupling in units of the exciton coupling

  void validate() const;
  bool operator==(const PhononParams&) const = default;
};

/// J(w) in ueV.
double spectral_density(double omega, const PhononParams& p);

/// phi(t) = int_0^inf dw J(w)/w^2 [coth(w / 2 k_B T) cos(w t) - i sin(w t)], t in 1/ueV.
/// Adaptive Gauss-Kronrod quadrature; throws SolverError if the error estimate misses rel_tol.
std::complex<double> phi(double t, const PhononParams& p, double rel_tol = 1e-8);

/// <B> = exp(-phi(0) / 2).
double bracket_b(const PhononParams& p);

/// Bath correlation channel of the polaron scattering term.
enum class PolaronChannel { Gerade, Ungerade };

/// phi(tau) tabulated once per parameter set; immutable after construction.
struct PhononKernels {
  PhononParams params;
  double phi0 = 0;       // phi(0), real
  double bracket_b = 1;  // exp(-phi0 / 2)
  std::vector<double> tau;
  std::vector<std::complex<double>> phi;

  /// <B> for a transition whose displacement is d times the exciton displacement.
  double bracket_b_scaled(double d) const { return std::exp(-d * d * phi0 / 2); }

  /// Bath correlation for transitions with displacements (da, db):
  ///   Gerade:   <B>_a <B>_b (cosh(da db phi(tau)) - 1)
  ///   Ungerade: <B>_a <B>_b  sinh(da db phi(tau))
  std::vector<std::complex<double>> correlation(PolaronChannel channel, double da, double db) const;
};

/// Tabulate phi on a graded grid that ends once |phi| < tail_tol on several consecutive points.
PhononKernels tabulate_phonon_kernels(const PhononParams& p, double tail_tol = 1e-8);

/// Process-wide cache: one tabulation per distinct parameter set, shared read-only.
std::shared_ptr<const PhononKernels> cached_phonon_kernels(const PhononParams& p);

/// int_0^{tau_end} dtau G(tau) e^{-i nu tau} for G linear between grid nodes (Filon-type rule,
/// exact for the oscillatory factor).
std::complex<double> one_sided_transform(std::span<const double> tau,
                                         std::span<const std::complex<double>> values, double nu);

/// Phonon-dressed coherent process P (e.g. eta sigma^dag_{X-G} or g a sigma^dag_{Y-G});
/// the polaron frame couples P B_+ + P^dag B_- to the bath.
struct PhononCoupling {
  MatrixXc raising;
  double displacement = 1.0;
};

/// Second-order polaron scattering superoperator
///
///   L_ph rho = - sum_{m in g,u} sum_{a,b} int_0^inf dtau G_m^{ab}(tau) [X_m^a, X_m^b(-tau) rho] + h.c.
///
/// with X_g = P + P^dag, X_u = i (P - P^dag) summed over couplings sharing a displacement,
/// and X(-tau) = e^{-i H tau} X e^{i H tau} evaluated in the eigenbasis of h_system.
MatrixXc polaron_dissipator(const MatrixXc& h_system, std::span<const PhononCoupling> couplings,
                            const PhononKernels& kernels);

}  // namespace qdc
