#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qdc/superoperator.hpp"

namespace qdc {

struct RegressionOptions {
  /// Keep the coherent (elastic) part as a discrete delta on the grid point nearest omega = 0.
  bool include_coherent = false;
  /// Minimum |(-i omega - lambda)| relative to the generator scale before the resolvent is
  /// declared singular.
  double singular_tol = 1e-13;
};

/// Stationary two-time spectrum by the quantum regression theorem:
///
///   S(w) = Re int_0^inf dtau e^{i w tau} < B(0) A(tau) >_ss
///        = Re Tr[ A (-i w - L)^{-1} (rho_ss B) ].
///
/// With A = sigma (lowering) and B = sigma^dag this is the emission spectrum; w is measured from
/// the frame frequency (the laser), so emission above the laser appears at w > 0.
///
/// The coherent part <B><A> is removed by projecting rho_ss B onto the traceless subspace. The
/// generator is deflated (L - s |rho_ss>><<1|) so the resolvent stays regular at w = 0, then
/// reduced once to complex Schur form; each grid point costs one triangular solve.
template <typename Real>
class RegressionSpectrum {
 public:
  RegressionSpectrum(const CMatrix<Real>& superop, const CMatrix<Real>& a, const CMatrix<Real>& b,
                     const CMatrix<Real>& rho_ss, RegressionOptions opts = {})
      : opts_(opts) {
    const Eigen::Index dim = rho_ss.rows();
    const CVector<Real> rho_vec = vectorize<Real>(rho_ss);
    const CRowVector<Real> tr = trace_functional<Real>(dim);

    const CVector<Real> source = vectorize<Real>(CMatrix<Real>(rho_ss * b));
    coherent_weight_ = (tr * source)(0) * (expectation_functional<Real>(a) * rho_vec)(0);
    const CVector<Real> incoherent = source - (tr * source)(0) * rho_vec;

    scale_ = std::max(Real(1), superop.cwiseAbs().maxCoeff());
    const CMatrix<Real> deflated = superop - scale_ * rho_vec * tr;

    Eigen::ComplexSchur<CMatrix<Real>> schur(deflated);
    if (schur.info() != Eigen::Success) throw SolverError("regression spectrum: Schur decomposition failed");
    t_ = schur.matrixT();
    const CMatrix<Real>& u = schur.matrixU();
    rhs_ = u.adjoint() * incoherent;
    observable_ = expectation_functional<Real>(a) * u;
  }

  /// Incoherent spectrum at a single offset.
  Real at(Real omega) const {
    const std::complex<Real> shift(0, -omega);
    const Eigen::Index n = t_.rows();
    CVector<Real> z(n);
    // Back substitution on (shift - T) z = rhs.
    for (Eigen::Index k = n - 1; k >= 0; --k) {
      const std::complex<Real> diag = shift - t_(k, k);
      if (std::abs(diag) < opts_.singular_tol * scale_) {
        std::ostringstream msg;
        msg << "regression spectrum: resolvent is singular at omega = " << omega
            << " (undamped Liouvillian eigenvalue; add nonzero dissipation)";
        throw SolverError(msg.str());
      }
      std::complex<Real> acc = rhs_(k);
      if (k + 1 < n) acc += (t_.row(k).tail(n - k - 1) * z.tail(n - k - 1))(0);
      z(k) = acc / diag;
    }
    return (observable_ * z)(0).real();
  }

  std::vector<Real> evaluate(std::span<const Real> grid) const {
    std::vector<Real> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = at(grid[i]);
    if (opts_.include_coherent && grid.size() >= 2) {
      const auto nearest = std::min_element(grid.begin(), grid.end(), [](Real x, Real y) {
        return std::abs(x) < std::abs(y);
      });
      const std::size_t k = static_cast<std::size_t>(nearest - grid.begin());
      const std::size_t lo = k > 0 ? k - 1 : k, hi = k + 1 < grid.size() ? k + 1 : k;
      const Real cell = (grid[hi] - grid[lo]) / Real(hi - lo);
      // Re int_0^inf e^{i w tau} dtau = pi delta(w)
      out[k] += Real(M_PI) * coherent_weight_.real() / cell;
    }
    return out;
  }

  /// <B><A>: weight of the elastic (coherent) component.
  std::complex<Real> coherent_weight() const { return coherent_weight_; }

 private:
  RegressionOptions opts_;
  CMatrix<Real> t_;
  CVector<Real> rhs_;
  CRowVector<Real> observable_;
  std::complex<Real> coherent_weight_{};
  Real scale_ = 1;
};

template <typename Real>
std::vector<Real> regression_spectrum(const CMatrix<Real>& superop, const CMatrix<Real>& a,
                                      const CMatrix<Real>& b, const CMatrix<Real>& rho_ss,
                                      std::span<const Real> omega_grid, RegressionOptions opts = {}) {
  return RegressionSpectrum<Real>(superop, a, b, rho_ss, opts).evaluate(omega_grid);
}

}  // namespace qdc
