#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>

#include "qdc/hilbert.hpp"

namespace qdc {

/// Rotating-frame detunings (ueV) of the bare QD states from the laser.
///   delta2 = w_Y - w_L,  delta3 = w_X - w_L,  delta4 = w_XX - 2 w_L.
struct DetuningSet {
  double delta2 = 0;
  double delta3 = 0;
  double delta4 = 0;

  /// Fine-structure splitting delta_XY = delta3 - delta2.
  double delta_xy() const { return delta3 - delta2; }
};

/// Effective drive of the x-polarized ladder.
struct DriveParams {
  double omega = 0;                    // cavity drive amplitude (ueV)
  std::complex<double> alpha{};        // coherent x-cavity amplitude
  std::complex<double> eta1{};         // G <-> X Rabi field (ueV)
  std::complex<double> eta2{};         // X <-> XX Rabi field (ueV)

  /// Drive obtained by adiabatically eliminating the x-cavity: eta_k = g_k^x alpha.
  static DriveParams from_cavity(double omega, double delta_cl_x, double kappa_x, double g1x, double g2x);
  /// Direct Rabi fields, no cavity.
  static DriveParams direct(std::complex<double> eta1, std::complex<double> eta2);

  double eta_squared() const { return std::norm(eta1) + std::norm(eta2); }
};

/// Coherent x-cavity amplitude alpha = Omega / (i Delta_cL^x + kappa_x / 2).
std::complex<double> adiabatic_alpha(double omega, double delta_cl_x, double kappa_x);

/// 4x4 Hamiltonian in the (G, Y, X, XX) basis:
///   D4|XX><XX| + D3|X><X| + D2|Y><Y| + (eta2 |XX><X| + eta1 |X><G| + h.c.)
Matrix4c build_atom_hamiltonian(const DetuningSet& det, const DriveParams& drive);

/// One y-polarized line of the dressed ladder.
struct DressedLine {
  std::string label;       // L1..L3, R1..R3
  double offset = 0;       // emission frequency minus w_L (ueV)
  double weight = 0;       // |<final| sigma_y |initial>|^2
  int dressed_state = 0;   // 1, 3 or 4: the dressed partner of |Y>
  bool from_y = false;     // true: |Y> -> |j> (exciton-like), false: |j> -> |Y> (biexciton-like)
};

/// Dressed states of the 4-level Hamiltonian.
///
/// eigenvalues[k] and eigenvectors.col(k) hold states |1>,|2>,|3>,|4> in that order:
/// |1> is the zero-energy branch at two-photon resonance, |2> = |Y>, and
/// |3>,|4> = (D3 +- sqrt(D3^2 + 4(|eta1|^2 + |eta2|^2))) / 2. Eigenvalues are signed.
struct DressedSolution {
  std::array<double, 4> eigenvalues{};
  Matrix4c eigenvectors = Matrix4c::Zero();
  DetuningSet detunings;
  bool numerical = false;  // true when D4 != 0 and the closed form does not apply
  std::array<DressedLine, 6> lines;
};

DressedSolution dressed_eigenvalues(const DetuningSet& det, const DriveParams& drive);

/// The six y-polarized transitions between |Y> and the dressed states |1>,|3>,|4>.
/// Each pair {D2 - D'_j, D'_j - D2} gives R_k (positive member) and L_k (its mirror),
/// with k = 1, 2, 3 for j = 1, 4, 3. R1 = D2 and R2 - R1 = |D'_4| when D2 > 0.
std::array<DressedLine, 6> transition_catalog(const DressedSolution& sol);

struct Splitting {
  double exact = 0;                  // |D'_1 - D'_4|, i.e. |D'_4| on two-photon resonance
  std::optional<double> approx;      // (|eta1|^2 + |eta2|^2) / D3, absent when D3 == 0
};

Splitting splitting_formulas(const DetuningSet& det, const DriveParams& drive);

/// Total |eta1|^2 + |eta2|^2 that yields the line splitting delta_omega at two-photon resonance.
double eta_squared_for_splitting(double delta_omega, double delta3);

/// x-cavity photon number N_c = D_Omega (D_Omega + D3) / (g2^2 + g1^2).
double photon_number_for_splitting(double delta_omega, double delta3, double g1x, double g2x);

}  // namespace qdc
