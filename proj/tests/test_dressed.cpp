#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "qdc/dressed.hpp"
#include "qdc/units.hpp"

using namespace qdc;

namespace {

std::array<double, 4> sorted_numeric(const DetuningSet& det, const DriveParams& drive) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(build_atom_hamiltonian(det, drive));
  std::array<double, 4> v{};
  for (int k = 0; k < 4; ++k) v[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
  return v;
}

}  // namespace

TEST_SUITE("dressed_analytics") {
  TEST_CASE("closed-form dressed energies match a numerical diagonalization") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> det(-1500, 1500), field(-200, 200);
    for (int trial = 0; trial < 300; ++trial) {
      const DetuningSet d{det(rng), det(rng), 0.0};
      const auto drive = DriveParams::direct({field(rng), field(rng)}, {field(rng), field(rng)});
      const auto sol = dressed_eigenvalues(d, drive);
      CHECK_FALSE(sol.numerical);
      auto closed = sol.eigenvalues;
      std::sort(closed.begin(), closed.end());
      const auto numeric = sorted_numeric(d, drive);
      for (std::size_t k = 0; k < 4; ++k) CHECK(closed[k] == doctest::Approx(numeric[k]).epsilon(1e-10).scale(1));

      // Each stored vector is an eigenvector for its stored value.
      const Matrix4c h = build_atom_hamiltonian(d, drive);
      for (int k = 0; k < 4; ++k) {
        const Eigen::Vector4cd v = sol.eigenvectors.col(k);
        CHECK((h * v - sol.eigenvalues[static_cast<std::size_t>(k)] * v).norm() < 1e-8);
      }
    }
  }

  TEST_CASE("branch formulas") {
    const DetuningSet d{965.0, 990.0, 0.0};
    const auto drive = DriveParams::direct(120.0, 90.0);
    const auto sol = dressed_eigenvalues(d, drive);
    const double root = std::sqrt(990.0 * 990.0 + 4 * (120.0 * 120.0 + 90.0 * 90.0));
    CHECK(sol.eigenvalues[0] == 0.0);
    CHECK(sol.eigenvalues[1] == 965.0);
    CHECK(sol.eigenvalues[2] == doctest::Approx((990.0 + root) / 2));
    CHECK(sol.eigenvalues[3] == doctest::Approx((990.0 - root) / 2));
    CHECK(std::norm(sol.eigenvectors(static_cast<int>(QdLevel::Y), 1)) == 1.0);
  }

  TEST_CASE("undriven limit recovers the bare transitions") {
    const DetuningSet d{965.0, 990.0, 0.0};
    const auto sol = dressed_eigenvalues(d, DriveParams::direct(0.0, 0.0));
    std::array<double, 4> expected{0.0, 965.0, 990.0, 0.0};
    for (std::size_t k = 0; k < 4; ++k) CHECK(sol.eigenvalues[k] == doctest::Approx(expected[k]));
    // R1 is the bare Y-G line. G and XX are degenerate here, so |1> is only fixed up to a
    // rotation inside that pair.
    CHECK(sol.lines[3].label == "R1");
    CHECK(sol.lines[3].offset == doctest::Approx(965.0));
    CHECK(sol.lines[3].weight + sol.lines[0].weight == doctest::Approx(1.0));
    CHECK(sol.lines[5].offset == doctest::Approx(25.0));
  }

  TEST_CASE("catalog is mirror symmetric and weights are complete") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> field(0, 150);
    for (int trial = 0; trial < 50; ++trial) {
      const DetuningSet d{965.0, 990.0, 0.0};
      const auto sol = dressed_eigenvalues(d, DriveParams::direct(field(rng), field(rng)));
      double from_y = 0, to_y = 0;
      for (std::size_t k = 0; k < 3; ++k) {
        const auto& left = sol.lines[k];
        const auto& right = sol.lines[k + 3];
        CHECK(left.label == "L" + std::to_string(k + 1));
        CHECK(right.label == "R" + std::to_string(k + 1));
        CHECK(right.offset >= 0);
        CHECK(left.offset == doctest::Approx(-right.offset));
        CHECK(left.dressed_state == right.dressed_state);
        for (const auto* line : {&left, &right}) (line->from_y ? from_y : to_y) += line->weight;
      }
      CHECK(from_y == doctest::Approx(1.0));
      CHECK(to_y == doctest::Approx(1.0));
      // R1 = D2 and R2 - R1 = |D'_4|.
      CHECK(sol.lines[3].offset == doctest::Approx(965.0));
      CHECK(sol.lines[4].offset - sol.lines[3].offset == doctest::Approx(std::abs(sol.eigenvalues[3])));
    }
  }

  TEST_CASE("off two-photon resonance falls back to the numerical branch assignment") {
    const DetuningSet d{965.0, 990.0, 25.0};
    const auto drive = DriveParams::direct(80.0, 100.0);
    const auto sol = dressed_eigenvalues(d, drive);
    CHECK(sol.numerical);
    auto values = sol.eigenvalues;
    std::sort(values.begin(), values.end());
    const auto numeric = sorted_numeric(d, drive);
    for (std::size_t k = 0; k < 4; ++k) CHECK(values[k] == doctest::Approx(numeric[k]));
    CHECK(std::norm(sol.eigenvectors(static_cast<int>(QdLevel::X), 2)) > 0.5);
  }

  TEST_CASE("splitting exact and perturbative forms") {
    const double d3 = 990.0;
    for (double target : {5.0, 40.0, 80.0, 196.0}) {
      const double eta2 = eta_squared_for_splitting(target, d3);
      const double e1 = std::sqrt(eta2 * 0.4), e2 = std::sqrt(eta2 * 0.6);
      const auto s = splitting_formulas({965.0, d3, 0.0}, DriveParams::direct(e1, e2));
      CHECK(s.exact == doctest::Approx(target).epsilon(1e-12));
      REQUIRE(s.approx.has_value());
      // (eta^2/D3 - D) / D = D / D3 exactly.
      CHECK((*s.approx - s.exact) / s.exact == doctest::Approx(target / d3).epsilon(1e-10));
    }
    CHECK_FALSE(splitting_formulas({965.0, 0.0, 0.0}, DriveParams::direct(10.0, 10.0)).approx.has_value());
    CHECK_THROWS_AS(eta_squared_for_splitting(-1.0, d3), ConfigError);
  }

  TEST_CASE("cavity photon number for a given splitting") {
    const double g1 = 26.7, g2 = 26.7 * std::sqrt(0.88 / 0.56);
    const double nc = photon_number_for_splitting(80.0, 990.0, g1, g2);
    CHECK(nc == doctest::Approx(80.0 * 1070.0 / (g1 * g1 + g2 * g2)));
    CHECK_THROWS_AS(photon_number_for_splitting(80.0, 990.0, 0.0, 0.0), ConfigError);

    // A drive with |alpha|^2 = N_c reproduces the splitting.
    const double kappa = 74.0;
    const double omega = std::sqrt(nc) * kappa / 2;
    const auto drive = DriveParams::from_cavity(omega, 0.0, kappa, g1, g2);
    CHECK(std::norm(drive.alpha) == doctest::Approx(nc));
    CHECK(splitting_formulas({965.0, 990.0, 0.0}, drive).exact == doctest::Approx(80.0));
  }

  TEST_CASE("adiabatic cavity amplitude and filtering") {
    const double kappa = 74.0, omega = 30.0;
    const auto on = adiabatic_alpha(omega, 0.0, kappa);
    CHECK(on.real() == doctest::Approx(2 * omega / kappa));
    CHECK(on.imag() == doctest::Approx(0.0));
    const auto off = adiabatic_alpha(omega, kappa, kappa);
    CHECK(std::norm(off) / std::norm(on) == doctest::Approx(0.2));
    CHECK(off.imag() < 0);
    CHECK_THROWS_AS(adiabatic_alpha(omega, 0.0, 0.0), ConfigError);

    const auto drive = DriveParams::from_cavity(omega, 10.0, kappa, 2.0, 3.0);
    CHECK(std::abs(drive.eta1 - 2.0 * drive.alpha) < 1e-15);
    CHECK(std::abs(drive.eta2 - 3.0 * drive.alpha) < 1e-15);
  }

  TEST_CASE("unit conversions") {
    CHECK(units::ueV_to_GHz(80.0) == doctest::Approx(19.344).epsilon(1e-4));
    CHECK(units::GHz_to_ueV(units::ueV_to_GHz(123.0)) == doctest::Approx(123.0));
    CHECK(units::ps_to_internal(units::kHbarUeVps) == doctest::Approx(1.0));
    CHECK(units::thermal_energy(10.0) == doctest::Approx(861.7333));
    CHECK(units::kappa_from_quality(10000.0, 1.3) == doctest::Approx(130.0));
    CHECK_THROWS_AS(units::kappa_from_quality(0.0, 1.3), ConfigError);
  }
}
