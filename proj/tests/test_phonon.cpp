#include <doctest.h>

#include <cmath>
#include <vector>

#include "qdc/peaks.hpp"
#include "qdc/phonon.hpp"
#include "qdc/superoperator.hpp"
#include "qdc/system.hpp"
#include "qdc/units.hpp"

using namespace qdc;

namespace {

PhononParams params(double temperature, double alpha_p = 0.06) {
  PhononParams p;
  p.alpha_p = alpha_p;
  p.temperature = temperature;
  return p;
}

// Composite Simpson on [0, upper] with n (even) panels.
template <typename F>
double simpson(F f, double upper, int n) {
  const double h = upper / n;
  double acc = f(0.0) + f(upper);
  for (int k = 1; k < n; ++k) acc += (k % 2 ? 4 : 2) * f(k * h);
  return acc * h / 3;
}

// Two-level reduction driven on the X-G transition.
SystemConfig two_level(double eta, double temperature, bool phonons) {
  SystemConfig c;
  c.drive = DriveConfig{};
  c.drive.eta1 = eta;
  c.drive.eta2 = 0.0;
  c.couplings = Couplings{0, 0, 0, 0};
  c.energies = {0.0, 0.0, 0.0};
  c.source = SpectrumSource::XDipole;
  c.numerics.n_max_y = 0;
  c.numerics.grid_span = 300;
  c.numerics.grid_points = 1201;
  c.phonon.enable = phonons;
  c.phonon.params.temperature = temperature;
  return c;
}

}  // namespace

TEST_SUITE("phonon_model") {
  TEST_CASE("spectral density peaks at sqrt(3) omega_b") {
    const auto p = params(0.0);
    const double wb = p.omega_b;
    const double peak = std::sqrt(3.0) * wb;
    CHECK(spectral_density(peak, p) > spectral_density(peak * 0.99, p));
    CHECK(spectral_density(peak, p) > spectral_density(peak * 1.01, p));
    const double alpha = units::ps2_to_internal(0.06);
    CHECK(spectral_density(500.0, p) == doctest::Approx(alpha * 125e6 * std::exp(-0.125)));
    CHECK(spectral_density(500.0, params(0.0, 0.0)) == 0.0);
  }

  TEST_CASE("zero-temperature correlation in closed form") {
    const auto p = params(0.0);
    const double alpha = units::ps2_to_internal(p.alpha_p);
    const double wb = p.omega_b;
    CHECK(phi(0.0, p).real() == doctest::Approx(alpha * wb * wb).epsilon(1e-8));
    CHECK(phi(0.0, p).imag() == doctest::Approx(0.0));
    for (double t : {2e-4, 1e-3, 3e-3}) {
      const auto v = phi(t, p);
      const double expected = -alpha * std::sqrt(M_PI / 2) * wb * wb * wb * t * std::exp(-wb * wb * t * t / 2);
      CHECK(v.imag() == doctest::Approx(expected).epsilon(1e-7));
    }
    CHECK(bracket_b(p) == doctest::Approx(std::exp(-alpha * wb * wb / 2)));
  }

  TEST_CASE("finite-temperature correlation against direct quadrature") {
    for (double temperature : {4.0, 6.8, 20.2, 50.0}) {
      const auto p = params(temperature);
      const double alpha = units::ps2_to_internal(p.alpha_p);
      const double kT = units::thermal_energy(temperature);
      const double wb = p.omega_b;
      auto integrand = [&](double w) {
        if (w == 0) return alpha * 2 * kT;
        return alpha * w * std::exp(-w * w / (2 * wb * wb)) / std::tanh(w / (2 * kT));
      };
      const double oracle = simpson(integrand, 12 * wb, 20000);
      CHECK(phi(0.0, p).real() == doctest::Approx(oracle).epsilon(1e-8));
    }
  }

  TEST_CASE("polaron overlap decreases with temperature") {
    double previous = 1.0;
    for (double temperature : {0.0, 4.0, 6.8, 20.2, 50.0}) {
      const double b = bracket_b(params(temperature));
      CHECK(b < previous);
      previous = b;
    }
    CHECK(bracket_b(params(6.8)) == doctest::Approx(0.8837).epsilon(1e-3));
    CHECK(bracket_b(params(20.0, 0.0)) == 1.0);
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(params(-1.0).validate(), ConfigError);
    CHECK_THROWS_AS(params(4.0, -0.1).validate(), ConfigError);
    auto p = params(4.0);
    p.omega_b = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_THROWS_AS(phi(-1.0, params(4.0)), ConfigError);
  }

  TEST_CASE("one-sided transform of an exponential") {
    std::vector<double> tau;
    std::vector<std::complex<double>> values;
    for (int k = 0; k <= 4000; ++k) {
      tau.push_back(k * 0.01);
      values.emplace_back(std::exp(-tau.back()));
    }
    for (double nu : {0.0, 0.5, 3.0, -7.0}) {
      const auto expected = 1.0 / std::complex<double>(1.0, nu);
      CHECK(std::abs(one_sided_transform(tau, values, nu) - expected) < 1e-4);
    }
    CHECK_THROWS_AS(one_sided_transform(tau, std::span(values).first(3), 1.0), ConfigError);
  }

  TEST_CASE("tabulated kernels") {
    const auto k = tabulate_phonon_kernels(params(6.8));
    REQUIRE(k.tau.size() == k.phi.size());
    CHECK(k.tau.front() == 0.0);
    CHECK(std::abs(k.phi.front() - phi(0.0, params(6.8))) < 1e-10);
    CHECK(std::abs(k.phi.back()) < 1e-6);
    CHECK(k.bracket_b_scaled(1.0) == doctest::Approx(k.bracket_b));
    CHECK(k.bracket_b_scaled(2.0) == doctest::Approx(std::pow(k.bracket_b, 4)));

    const auto g = k.correlation(PolaronChannel::Gerade, 1.0, 1.0);
    const auto u = k.correlation(PolaronChannel::Ungerade, 1.0, 1.0);
    const double b2 = k.bracket_b * k.bracket_b;
    CHECK(std::abs(g[0] - b2 * (std::cosh(k.phi0) - 1.0)) < 1e-12);
    CHECK(std::abs(u[0] - b2 * std::sinh(k.phi0)) < 1e-12);

    const auto a = cached_phonon_kernels(params(6.8));
    CHECK(a == cached_phonon_kernels(params(6.8)));
    CHECK(a != cached_phonon_kernels(params(7.0)));
  }

  TEST_CASE("scattering superoperator") {
    const HilbertSpace space(0);
    MatrixXc h = 30.0 * embed_qd_projector(space, QdLevel::X);
    const MatrixXc raising = 25.0 * embed_qd_transition(space, QdLevel::G, QdLevel::X);
    h += raising + raising.adjoint();
    const std::vector<PhononCoupling> couplings{{raising, 1.0}};

    const auto kernels = tabulate_phonon_kernels(params(6.8));
    const MatrixXc l = polaron_dissipator(h, couplings, kernels);
    CHECK(l.norm() > 0);
    CHECK(trace_preservation_error<double>(l) < 1e-12);
    MatrixXc rho = MatrixXc::Identity(4, 4) / 4.0;
    rho(0, 2) = rho(2, 0) = 0.1;
    const MatrixXc out = apply<double>(l, rho);
    CHECK((out - out.adjoint()).norm() < 1e-12);

    const MatrixXc none = polaron_dissipator(h, couplings, tabulate_phonon_kernels(params(6.8, 0.0)));
    CHECK(none.norm() == 0.0);
  }

  TEST_CASE("phonon sidebands of a strongly driven exciton are asymmetric") {
    const double eta = 50.0;
    auto sidebands = [](const SpectrumResult& s) {
      const auto report = extract_peaks(s, 0.01, 1e9);
      REQUIRE(report.count() == 3);
      return report;
    };
    const auto cold = sidebands(compute_spectrum(two_level(eta, 6.8, true)));
    const auto hot = sidebands(compute_spectrum(two_level(eta, 40.0, true)));
    const auto bare = sidebands(compute_spectrum(two_level(eta, 6.8, false)));

    // Renormalized Rabi splitting 2 <B> eta.
    const double b = bracket_b(params(6.8));
    CHECK(cold.peaks[2].position == doctest::Approx(2 * b * eta).epsilon(0.02));
    CHECK(bare.peaks[2].position == doctest::Approx(2 * eta).epsilon(0.01));

    // Phonon emission is favoured at low temperature: the high-energy sideband is weaker.
    const double cold_ratio = cold.peaks[2].height / cold.peaks[0].height;
    const double hot_ratio = hot.peaks[2].height / hot.peaks[0].height;
    CHECK(cold_ratio < 1.0);
    CHECK(hot_ratio > cold_ratio);
    CHECK(bare.peaks[2].height / bare.peaks[0].height == doctest::Approx(1.0).epsilon(1e-6));
  }
}
