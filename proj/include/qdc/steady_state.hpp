#pragma once

#include <string>

#include <Eigen/QR>

#include "qdc/superoperator.hpp"

namespace qdc {

struct SteadyStateOptions {
  double kernel_threshold = 1e-11;  // relative pivot threshold for the rank-revealing QR
  int refinement_steps = 2;
};

/// Dimension of the numerical kernel of a generator.
template <typename Real>
Eigen::Index kernel_dimension(const CMatrix<Real>& superop, double threshold = 1e-11) {
  Eigen::ColPivHouseholderQR<CMatrix<Real>> qr(superop);
  qr.setThreshold(threshold);
  return superop.cols() - qr.rank();
}

template <typename Real>
struct SteadyStateSolution {
  CMatrix<Real> rho;
  Real raw_hermiticity_error = 0;  // ||rho - rho^dag|| of the linear solve, before symmetrizing
  Real residual = 0;               // ||L vec(rho)|| of the returned state
};

/// Unique stationary state of L, normalized to unit trace.
///
/// One of the (linearly dependent) population rows of L is replaced by the trace condition and
/// the resulting regular system is solved by LU with a few steps of iterative refinement.
/// Throws SolverError when the kernel of L is not one-dimensional.
template <typename Real>
SteadyStateSolution<Real> solve_steady_state(const CMatrix<Real>& superop, const SteadyStateOptions& opts = {}) {
  const Eigen::Index n = superop.rows();
  const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (dim * dim != n || superop.cols() != n) throw ConfigError("steady_state: not a square superoperator");

  const Eigen::Index kdim = kernel_dimension<Real>(superop, opts.kernel_threshold);
  if (kdim != 1)
    throw SolverError("steady_state: Liouvillian kernel has dimension " + std::to_string(kdim) +
                      " (expected exactly 1)");

  CMatrix<Real> system = superop;
  system.row(0) = trace_functional<Real>(dim);
  CVector<Real> rhs = CVector<Real>::Zero(n);
  rhs(0) = 1;

  Eigen::PartialPivLU<CMatrix<Real>> lu(system);
  CVector<Real> x = lu.solve(rhs);
  for (int k = 0; k < opts.refinement_steps; ++k) x += lu.solve(CVector<Real>(rhs - system * x));

  SteadyStateSolution<Real> out;
  out.rho = unvectorize<Real>(x);
  out.raw_hermiticity_error = (out.rho - out.rho.adjoint()).norm();
  out.rho = (out.rho + out.rho.adjoint()).eval() / Real(2);
  out.rho /= out.rho.trace().real();
  out.residual = (superop * vectorize<Real>(out.rho)).norm();
  return out;
}

template <typename Real>
CMatrix<Real> steady_state(const CMatrix<Real>& superop, const SteadyStateOptions& opts = {}) {
  return solve_steady_state<Real>(superop, opts).rho;
}

template <typename Real>
Real steady_state_residual(const CMatrix<Real>& superop, const CMatrix<Real>& rho) {
  return (superop * vectorize<Real>(rho)).norm();
}

/// Diagnostics used by the acceptance checks on every solve.
struct DensityDiagnostics {
  double trace_error = 0;        // |Tr rho - 1|
  double hermiticity_error = 0;  // ||rho - rho^dag||
  double min_eigenvalue = 0;
};

template <typename Real>
DensityDiagnostics diagnose_density(const CMatrix<Real>& rho) {
  DensityDiagnostics d;
  d.trace_error = std::abs(rho.trace() - std::complex<Real>(1));
  d.hermiticity_error = (rho - rho.adjoint()).norm();
  const CMatrix<Real> herm = (rho + rho.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  return d;
}

}  // namespace qdc
