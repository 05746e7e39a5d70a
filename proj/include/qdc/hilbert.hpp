#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "qdc/errors.hpp"

namespace qdc {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CRowVector = Eigen::Matrix<std::complex<Real>, 1, Eigen::Dynamic>;

using MatrixXc = CMatrix<double>;
using VectorXc = CVector<double>;
using Matrix4c = Eigen::Matrix<std::complex<double>, 4, 4>;

/// Quantum-dot levels in basis order.
enum class QdLevel : int { G = 0, Y = 1, X = 2, XX = 3 };

inline constexpr int kQdLevels = 4;
inline constexpr std::array<QdLevel, kQdLevels> kAllLevels{QdLevel::G, QdLevel::Y, QdLevel::X,
                                                           QdLevel::XX};

inline std::string_view to_string(QdLevel level) {
  switch (level) {
    case QdLevel::G: return "G";
    case QdLevel::Y: return "Y";
    case QdLevel::X: return "X";
    case QdLevel::XX: return "XX";
  }
  return "?";
}

inline QdLevel parse_level(std::string_view label) {
  for (QdLevel level : kAllLevels)
    if (to_string(level) == label) return level;
  throw ConfigError("unknown quantum-dot level '" + std::string(label) + "' (expected G, Y, X or XX)");
}

/// Composite space QD (4 levels) (x) y-cavity Fock space truncated at n_max_y photons.
///
/// Basis ordering is fixed: index = qd_index * (n_max_y + 1) + n_photon, i.e. the QD is the
/// outer (slow) factor of every Kronecker product below.
struct HilbertSpace {
  int n_max_y = 0;

  explicit HilbertSpace(int n_max = 0) : n_max_y(n_max) {
    if (n_max < 0) throw ConfigError("n_max_y must be >= 0");
  }

  int photon_dim() const { return n_max_y + 1; }
  int dim() const { return kQdLevels * photon_dim(); }
  int index(QdLevel level, int n_photon) const {
    return static_cast<int>(level) * photon_dim() + n_photon;
  }
};

template <typename Real>
CMatrix<Real> kron(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  CMatrix<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Lift a 4x4 QD operator to the composite space (op (x) 1_photon).
template <typename Real = double>
CMatrix<Real> embed_qd_operator(const HilbertSpace& space, const CMatrix<Real>& qd_op) {
  if (qd_op.rows() != kQdLevels || qd_op.cols() != kQdLevels)
    throw ConfigError("embed_qd_operator: expected a 4x4 operator");
  return kron<Real>(qd_op, CMatrix<Real>::Identity(space.photon_dim(), space.photon_dim()));
}

/// |to><from| (x) 1_photon. (from = X, to = G) is the lowering operator sigma_{X-G}.
template <typename Real = double>
CMatrix<Real> embed_qd_transition(const HilbertSpace& space, QdLevel from, QdLevel to) {
  CMatrix<Real> qd = CMatrix<Real>::Zero(kQdLevels, kQdLevels);
  qd(static_cast<int>(to), static_cast<int>(from)) = 1;
  return embed_qd_operator<Real>(space, qd);
}

template <typename Real = double>
CMatrix<Real> embed_qd_transition(const HilbertSpace& space, std::string_view from, std::string_view to) {
  return embed_qd_transition<Real>(space, parse_level(from), parse_level(to));
}

template <typename Real = double>
CMatrix<Real> embed_qd_projector(const HilbertSpace& space, QdLevel level) {
  return embed_qd_transition<Real>(space, level, level);
}

/// 1_qd (x) a, with a|n> = sqrt(n)|n-1> on the truncated Fock space.
template <typename Real = double>
CMatrix<Real> embed_photon_annihilator(const HilbertSpace& space) {
  const int n = space.photon_dim();
  CMatrix<Real> a = CMatrix<Real>::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<Real>(k));
  return kron<Real>(CMatrix<Real>::Identity(kQdLevels, kQdLevels), a);
}

/// ||H - H^dagger|| / max(1, ||H||) in Frobenius norm.
template <typename Derived>
auto hermiticity_error(const Eigen::MatrixBase<Derived>& h) {
  using std::max;
  const auto scale = max(decltype(h.norm())(1), h.norm());
  return (h - h.adjoint()).norm() / scale;
}

}  // namespace qdc
