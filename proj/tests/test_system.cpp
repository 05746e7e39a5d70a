#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qdc/peaks.hpp"
#include "qdc/system.hpp"

using namespace qdc;

namespace {

SystemConfig quiet() {
  SystemConfig c;
  c.phonon.enable = false;
  c.couplings = Couplings{26.7, 30.0, 0, 0};
  c.numerics.n_max_y = 0;
  c.drive = DriveConfig{};
  c.drive.omega = 0.0;
  return c;
}

MatrixXc ket_bra(const HilbertSpace& s, QdLevel a, QdLevel b) { return embed_qd_transition(s, b, a); }

}  // namespace

TEST_SUITE("system_assembly") {
  TEST_CASE("detunings follow the laser") {
    SystemConfig c;
    c.laser_detuning = 30.0;
    c.energies.biexciton = 12.0;
    const auto d = detunings(c);
    CHECK(d.delta2 == doctest::Approx(935.0));
    CHECK(d.delta3 == doctest::Approx(960.0));
    CHECK(d.delta4 == doctest::Approx(12.0 - 60.0));
    CHECK(d.delta_xy() == doctest::Approx(25.0));
    CHECK(cavity_detuning_x(c) == -30.0);
    CHECK(cavity_detuning_y(c) == -350.0);
    CHECK(two_photon_laser_detuning(c) == 6.0);
    c.laser_detuning = two_photon_laser_detuning(c);
    CHECK(detunings(c).delta4 == 0.0);
  }

  TEST_CASE("projector dephasing reproduces every transition rate") {
    Rates r;
    // Realizable sets satisfy XX-X + Y-G == X-G + XX-Y.
    r.dephasing_x_g = 8.0;
    r.dephasing_xx_x = 10.0;
    r.dephasing_y_g = 7.0;
    r.dephasing_xx_y = 9.0;
    const auto sol = solve_dephasing_rates(r);
    const auto& p = sol.projector_rates;
    auto g = [&](QdLevel l) { return p[static_cast<std::size_t>(l)]; };
    CHECK(sol.residual < 1e-12);
    CHECK(g(QdLevel::X) + g(QdLevel::XX) == doctest::Approx(10.0));
    CHECK(g(QdLevel::G) + g(QdLevel::X) == doctest::Approx(8.0));
    CHECK(g(QdLevel::Y) + g(QdLevel::XX) == doctest::Approx(9.0));
    CHECK(g(QdLevel::G) + g(QdLevel::Y) == doctest::Approx(7.0));
    for (double v : p) CHECK(v >= 0);

    const auto uniform = solve_dephasing_rates(Rates{});
    for (double v : uniform.projector_rates) CHECK(v == doctest::Approx(4.1));

    // Four transitions on four levels are not independent; an inconsistent set is a best fit.
    Rates odd;
    odd.dephasing_x_g = 8.0;
    odd.dephasing_xx_x = 8.0;
    odd.dephasing_y_g = 8.0;
    odd.dephasing_xx_y = 12.0;
    CHECK(solve_dephasing_rates(odd).residual > 0.1);

    Rates bad;
    bad.dephasing_xx_x = 0;
    bad.dephasing_x_g = 10;
    bad.dephasing_xx_y = 0;
    bad.dephasing_y_g = 10;
    CHECK_THROWS_AS(solve_dephasing_rates(bad), ConfigError);
  }

  TEST_CASE("undriven coherences decay at the radiative plus dephasing rate") {
    auto c = quiet();
    const auto m = build_system(c);
    const auto& s = m.space;
    const auto& r = c.rates;
    const std::complex<double> i(0, 1);
    struct Case {
      QdLevel a, b;
      std::complex<double> rate;
    };
    const auto& d = m.detunings;
    const std::array<Case, 4> cases{{
        {QdLevel::G, QdLevel::X, i * d.delta3 - (r.gamma_x_g + r.dephasing_x_g) / 2},
        {QdLevel::G, QdLevel::Y, i * d.delta2 - (r.gamma_y_g + r.dephasing_y_g) / 2},
        {QdLevel::X, QdLevel::XX,
         i * (d.delta4 - d.delta3) - (r.gamma_x_g + r.gamma_xx_x + r.gamma_xx_y + r.dephasing_xx_x) / 2},
        {QdLevel::Y, QdLevel::XX,
         i * (d.delta4 - d.delta2) - (r.gamma_y_g + r.gamma_xx_x + r.gamma_xx_y + r.dephasing_xx_y) / 2},
    }};
    for (const auto& cs : cases) {
      const MatrixXc rho = ket_bra(s, cs.a, cs.b);
      const MatrixXc out = apply<double>(m.liouvillian, rho);
      CHECK((out - cs.rate * rho).norm() < 1e-10);
    }
  }

  TEST_CASE("Hamiltonian structure") {
    SystemConfig c;
    c.phonon.enable = false;
    const auto m = build_system(c);
    CHECK(m.hamiltonian.rows() == 12);
    CHECK(hermiticity_error(m.hamiltonian) < 1e-14);
    CHECK(build_reduced_hamiltonian(c).isApprox(m.hamiltonian));
    CHECK(assemble_liouvillian(c).rows() == 144);
    // Calibrated drive reproduces the requested splitting.
    CHECK(splitting_formulas(m.detunings, m.drive).exact == doctest::Approx(80.0));

    c.phonon.enable = true;
    const auto mp = build_system(c);
    CHECK(mp.bracket_b_x == doctest::Approx(bracket_b(c.phonon.params)));
    const auto renormalized = DriveParams::direct(mp.drive.eta1 * mp.bracket_b_x, mp.drive.eta2 * mp.bracket_b_xx);
    CHECK(splitting_formulas(mp.detunings, renormalized).exact == doctest::Approx(80.0));
    CHECK(omega_for_splitting(c, 80.0) > m.drive.omega);
  }

  TEST_CASE("spectral lines sit on the dressed-state catalog") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> split(50, 150);
    for (int trial = 0; trial < 6; ++trial) {
      SystemConfig c;
      c.phonon.enable = false;
      c.drive = DriveConfig{};
      c.drive.splitting = split(rng);
      const auto m = build_system(c);
      const auto s = compute_spectrum(m);
      const auto sol = dressed_eigenvalues(m.detunings, m.drive);
      const auto report = extract_peaks(s);
      CAPTURE(*c.drive.splitting);
      REQUIRE(report.count() == 6);
      for (const auto& p : report.peaks) {
        double best = 1e9;
        for (const auto& line : sol.lines) best = std::min(best, std::abs(line.offset - p.position));
        CHECK(best < 3.0);
      }
      REQUIRE(report.x_side_splittings.size() == 1);
      CHECK(report.x_side_splittings[0] == doctest::Approx(*c.drive.splitting).epsilon(0.03));
    }
  }

  TEST_CASE("vanishing phonon coupling matches the phonon-free model") {
    SystemConfig c;
    c.numerics.n_max_y = 1;
    c.numerics.grid_points = 301;
    c.drive = DriveConfig{};
    c.drive.omega = 60.0;
    c.phonon.params.alpha_p = 0.0;
    const auto with = compute_spectrum(c);
    c.phonon.enable = false;
    const auto without = compute_spectrum(c);
    CHECK(with.phonons);
    CHECK_FALSE(without.phonons);
    double diff = 0;
    for (std::size_t k = 0; k < with.intensity.size(); ++k)
      diff = std::max(diff, std::abs(with.intensity[k] - without.intensity[k]));
    CHECK(diff < 1e-8);
  }

  TEST_CASE("configuration validation") {
    auto expect_error = [](auto mutate) {
      SystemConfig c;
      mutate(c);
      CHECK_THROWS_AS(build_system(c), ConfigError);
    };
    expect_error([](SystemConfig& c) { c.rates.kappa_y = -1; });
    expect_error([](SystemConfig& c) { c.rates.dephasing_x_g = std::nan(""); });
    expect_error([](SystemConfig& c) { c.drive.omega = 3.0; });
    expect_error([](SystemConfig& c) {
      c.drive = DriveConfig{};
      c.drive.eta1 = 1.0;
    });
    expect_error([](SystemConfig& c) { c.numerics.n_max_y = 0; });
    expect_error([](SystemConfig& c) { c.numerics.grid_points = 1; });
    expect_error([](SystemConfig& c) { c.numerics.grid_span = 0; });
    expect_error([](SystemConfig& c) { c.phonon.params.temperature = -2; });
    expect_error([](SystemConfig& c) { c.drive.splitting = -5.0; });
    CHECK_THROWS_AS(parse_source("z-dipole"), ConfigError);
    CHECK(parse_source(to_string(SpectrumSource::Both)) == SpectrumSource::Both);

    SystemConfig c;
    c.phonon.enable = false;
    c.numerics.n_max_y = 1;
    const auto m = build_system(c);
    CHECK_THROWS_AS(compute_spectrum(m, {1.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(compute_spectrum(m, std::vector<double>{}), ConfigError);
  }

  TEST_CASE("y emission operator weights") {
    const HilbertSpace s(1);
    const Rates r;
    const int y_g_row = s.index(QdLevel::G, 0), y_g_col = s.index(QdLevel::Y, 0);
    const int xx_y_row = s.index(QdLevel::Y, 0), xx_y_col = s.index(QdLevel::XX, 0);
    const auto weighted = source_operator(s, SpectrumSource::YDipole, r, true);
    CHECK(weighted(y_g_row, y_g_col).real() == 1.0);
    CHECK(weighted(xx_y_row, xx_y_col).real() == doctest::Approx(std::sqrt(0.88 / 0.56)));
    const auto plain = source_operator(s, SpectrumSource::YDipole, r, false);
    CHECK(plain(xx_y_row, xx_y_col).real() == 1.0);
    CHECK(source_operator(s, SpectrumSource::YCavity).isApprox(embed_photon_annihilator(s)));
    const auto x = source_operator(s, SpectrumSource::XDipole);
    CHECK(x(s.index(QdLevel::G, 0), s.index(QdLevel::X, 0)).real() == 1.0);
  }

  TEST_CASE("every detection channel gives a finite normalized spectrum") {
    for (auto source : {SpectrumSource::YDipole, SpectrumSource::YCavity, SpectrumSource::Both}) {
      SystemConfig c;
      c.phonon.enable = false;
      c.numerics.n_max_y = 1;
      c.numerics.grid_points = 201;
      c.source = source;
      const auto s = compute_spectrum(c);
      CAPTURE(to_string(source));
      CHECK(std::all_of(s.intensity.begin(), s.intensity.end(), [](double v) { return std::isfinite(v); }));
      CHECK(*std::max_element(s.intensity.begin(), s.intensity.end()) == doctest::Approx(1.0));
      CHECK(s.normalization > 0);
      CHECK(s.diagnostics.steady_state_residual < 1e-9);
      CHECK(s.diagnostics.density_min_eigenvalue > -1e-8);
    }
  }
}
