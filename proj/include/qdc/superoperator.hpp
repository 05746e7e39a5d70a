#pragma once

#include <cmath>
#include <vector>

#include "qdc/hilbert.hpp"

// Superoperators act on column-stacked density matrices:
//   vec(A rho B) = (B^T (x) A) vec(rho),   vec index = row + col * dim.

namespace qdc {

template <typename Real>
CVector<Real> vectorize(const CMatrix<Real>& rho) {
  return Eigen::Map<const CVector<Real>>(rho.data(), rho.size());
}

template <typename Real>
CMatrix<Real> unvectorize(const CVector<Real>& v) {
  const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (dim * dim != v.size()) throw ConfigError("unvectorize: length is not a perfect square");
  return Eigen::Map<const CMatrix<Real>>(v.data(), dim, dim);
}

/// rho -> A rho
template <typename Real>
CMatrix<Real> left_multiply(const CMatrix<Real>& a) {
  return kron<Real>(CMatrix<Real>::Identity(a.rows(), a.rows()), a);
}

/// rho -> rho B
template <typename Real>
CMatrix<Real> right_multiply(const CMatrix<Real>& b) {
  return kron<Real>(b.transpose(), CMatrix<Real>::Identity(b.rows(), b.rows()));
}

/// rho -> A rho B
template <typename Real>
CMatrix<Real> sandwich(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  return kron<Real>(b.transpose(), a);
}

/// Row functional t with t . vec(rho) = Tr(rho).
template <typename Real>
CRowVector<Real> trace_functional(Eigen::Index dim) {
  CRowVector<Real> t = CRowVector<Real>::Zero(dim * dim);
  for (Eigen::Index i = 0; i < dim; ++i) t(i + i * dim) = 1;
  return t;
}

/// Row functional r with r . vec(rho) = Tr(A rho).
template <typename Real>
CRowVector<Real> expectation_functional(const CMatrix<Real>& a) {
  const CMatrix<Real> at = a.transpose();
  return Eigen::Map<const CRowVector<Real>>(at.data(), at.size());
}

/// rho -> -i [H, rho]
template <typename Real>
CMatrix<Real> hamiltonian_generator(const CMatrix<Real>& h) {
  const std::complex<Real> i(0, 1);
  return -i * (left_multiply<Real>(h) - right_multiply<Real>(h));
}

/// rate/2 (2 O rho O^dag - O^dag O rho - rho O^dag O)
template <typename Real>
CMatrix<Real> lindblad_dissipator(const CMatrix<Real>& op, Real rate) {
  if (!(rate >= 0)) throw ConfigError("lindblad_dissipator: rate must be non-negative");
  const Eigen::Index n = op.rows() * op.rows();
  if (rate == 0) return CMatrix<Real>::Zero(n, n);
  const CMatrix<Real> odo = op.adjoint() * op;
  const CMatrix<Real> jump = sandwich<Real>(op, op.adjoint());
  return (rate / 2) * (Real(2) * jump - left_multiply<Real>(odo) - right_multiply<Real>(odo));
}

/// Full generator -i[H, .] + sum of dissipators. H must be Hermitian.
template <typename Real>
CMatrix<Real> liouvillian(const CMatrix<Real>& h, const std::vector<CMatrix<Real>>& dissipators,
                          Real hermiticity_tol = Real(1e-12)) {
  if (hermiticity_error(h) > hermiticity_tol)
    throw ConfigError("liouvillian: Hamiltonian is not Hermitian");
  CMatrix<Real> l = hamiltonian_generator<Real>(h);
  for (const auto& d : dissipators) {
    if (d.rows() != l.rows() || d.cols() != l.cols())
      throw ConfigError("liouvillian: dissipator dimension mismatch");
    l += d;
  }
  return l;
}

template <typename Real>
CMatrix<Real> apply(const CMatrix<Real>& superop, const CMatrix<Real>& rho) {
  return unvectorize<Real>(CVector<Real>(superop * vectorize<Real>(rho)));
}

/// max |Tr(L rho)| over the trace functional: || t . L ||_inf.
template <typename Real>
Real trace_preservation_error(const CMatrix<Real>& superop) {
  const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(superop.rows()))));
  return (trace_functional<Real>(dim) * superop).cwiseAbs().maxCoeff();
}

}  // namespace qdc
