#include "qdc/dressed.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

namespace qdc {

namespace {

constexpr int kG = static_cast<int>(QdLevel::G);
constexpr int kY = static_cast<int>(QdLevel::Y);
constexpr int kX = static_cast<int>(QdLevel::X);
constexpr int kXX = static_cast<int>(QdLevel::XX);

}  // namespace

std::complex<double> adiabatic_alpha(double omega, double delta_cl_x, double kappa_x) {
  const std::complex<double> denom(kappa_x / 2, delta_cl_x);
  if (denom == std::complex<double>(0, 0))
    throw ConfigError("adiabatic_alpha: zero denominator (cavity detuning and kappa_x both zero)");
  return omega / denom;
}

DriveParams DriveParams::from_cavity(double omega, double delta_cl_x, double kappa_x, double g1x,
                                     double g2x) {
  DriveParams d;
  d.omega = omega;
  d.alpha = adiabatic_alpha(omega, delta_cl_x, kappa_x);
  d.eta1 = g1x * d.alpha;
  d.eta2 = g2x * d.alpha;
  return d;
}

DriveParams DriveParams::direct(std::complex<double> eta1, std::complex<double> eta2) {
  DriveParams d;
  d.eta1 = eta1;
  d.eta2 = eta2;
  return d;
}

Matrix4c build_atom_hamiltonian(const DetuningSet& det, const DriveParams& drive) {
  Matrix4c h = Matrix4c::Zero();
  h(kY, kY) = det.delta2;
  h(kX, kX) = det.delta3;
  h(kXX, kXX) = det.delta4;
  h(kXX, kX) = drive.eta2;
  h(kX, kXX) = std::conj(drive.eta2);
  h(kX, kG) = drive.eta1;
  h(kG, kX) = std::conj(drive.eta1);
  return h;
}

DressedSolution dressed_eigenvalues(const DetuningSet& det, const DriveParams& drive) {
  DressedSolution sol;
  sol.detunings = det;
  sol.numerical = det.delta4 != 0.0;

  // |Y> is decoupled; diagonalize the {G, X, XX} block on its own so degeneracies with D2
  // cannot mix |Y> into the dressed states.
  const Matrix4c h = build_atom_hamiltonian(det, drive);
  constexpr std::array<int, 3> block{kG, kX, kXX};
  Eigen::Matrix3cd sub;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) sub(r, c) = h(block[r], block[c]);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(sub);
  const Eigen::Vector3d vals = es.eigenvalues();
  Matrix4c vecs = Matrix4c::Zero();
  for (int k = 0; k < 3; ++k)
    for (int r = 0; r < 3; ++r) vecs(block[r], k) = es.eigenvectors()(r, k);
  const std::array<int, 3> dressed{0, 1, 2};
  Eigen::Vector4cd y_state = Eigen::Vector4cd::Zero();
  y_state(kY) = 1;

  const double root = std::sqrt(det.delta3 * det.delta3 + 4.0 * drive.eta_squared());
  int slot1, slot3, slot4;
  if (!sol.numerical) {
    const std::array<double, 3> closed{0.0, (det.delta3 + root) / 2, (det.delta3 - root) / 2};
    // Match each closed-form branch to its numerical eigenvector. Degenerate branches (undriven
    // limit) can share a value; take the nearest still-unused vector.
    std::array<int, 3> slots{};
    std::array<bool, 3> used{};
    for (int b : {1, 2, 0}) {
      int best = -1;
      double best_dist = 0;
      for (int c = 0; c < 3; ++c) {
        if (used[c]) continue;
        const double dist = std::abs(vals(dressed[c]) - closed[b]);
        if (best < 0 || dist < best_dist) best = c, best_dist = dist;
      }
      used[best] = true;
      slots[b] = dressed[best];
    }
    slot1 = slots[0];
    slot3 = slots[1];
    slot4 = slots[2];
    sol.eigenvalues = {closed[0], det.delta2, closed[1], closed[2]};
  } else {
    // Off two-photon resonance: |3> is the X-dominated state, |1> the G-dominated of the rest.
    auto by_weight = [&](int level) {
      return [&vecs, level](int a, int b) { return std::norm(vecs(level, a)) < std::norm(vecs(level, b)); };
    };
    slot3 = *std::max_element(dressed.begin(), dressed.end(), by_weight(kX));
    std::vector<int> rest;
    rest.reserve(2);
    for (int k : dressed)
      if (k != slot3) rest.push_back(k);
    slot1 = *std::max_element(rest.begin(), rest.end(), by_weight(kG));
    slot4 = rest[0] == slot1 ? rest[1] : rest[0];
    sol.eigenvalues = {vals(slot1), det.delta2, vals(slot3), vals(slot4)};
  }
  sol.eigenvectors.col(0) = vecs.col(slot1);
  sol.eigenvectors.col(1) = y_state;
  sol.eigenvectors.col(2) = vecs.col(slot3);
  sol.eigenvectors.col(3) = vecs.col(slot4);
  sol.lines = transition_catalog(sol);
  return sol;
}

std::array<DressedLine, 6> transition_catalog(const DressedSolution& sol) {
  std::array<DressedLine, 6> lines;
  const double d2 = sol.eigenvalues[1];
  // (R_k/L_k index, dressed state number, column in eigenvectors)
  constexpr std::array<std::array<int, 3>, 3> order{{{1, 1, 0}, {2, 4, 3}, {3, 3, 2}}};
  for (std::size_t n = 0; n < order.size(); ++n) {
    const auto [k, state, col] = order[n];
    const double down = d2 - sol.eigenvalues[col];  // |Y> -> |j>
    DressedLine y_to_j{"", down, std::norm(sol.eigenvectors(kG, col)), state, true};
    DressedLine j_to_y{"", -down, std::norm(sol.eigenvectors(kXX, col)), state, false};
    DressedLine& right = down >= 0 ? y_to_j : j_to_y;
    DressedLine& left = down >= 0 ? j_to_y : y_to_j;
    right.label = "R" + std::to_string(k);
    left.label = "L" + std::to_string(k);
    lines[n] = left;
    lines[n + 3] = right;
  }
  return lines;
}

Splitting splitting_formulas(const DetuningSet& det, const DriveParams& drive) {
  Splitting s;
  // Separation of |1> and |4>; equals |D'_4| at two-photon resonance where D'_1 = 0.
  const auto sol = dressed_eigenvalues(det, drive);
  s.exact = std::abs(sol.eigenvalues[0] - sol.eigenvalues[3]);
  if (det.delta3 != 0.0) s.approx = drive.eta_squared() / det.delta3;
  return s;
}

double eta_squared_for_splitting(double delta_omega, double delta3) {
  if (delta_omega < 0) throw ConfigError("eta_squared_for_splitting: splitting must be non-negative");
  return delta_omega * (delta_omega + delta3);
}

double photon_number_for_splitting(double delta_omega, double delta3, double g1x, double g2x) {
  const double g2sum = g1x * g1x + g2x * g2x;
  if (g2sum == 0.0) throw ConfigError("photon_number_for_splitting: both x-cavity couplings are zero");
  return eta_squared_for_splitting(delta_omega, delta3) / g2sum;
}

}  // namespace qdc
