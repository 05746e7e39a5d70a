#include "qdc/phonon.hpp"

#include <cmath>
#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qdc/superoperator.hpp"
#include "qdc/units.hpp"

namespace qdc {

namespace {

using cd = std::complex<double>;

// exp(-w^2 / 2 w_b^2) < 5e-18 beyond this multiple of w_b.
constexpr double kCutoffMultiple = 8.94;

// x coth(x), finite at x = 0.
double x_coth_x(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 3.0;
  return x / std::tanh(x);
}

// w coth(w / 2 k_B T); reduces to w at T = 0.
double thermal_weight(double omega, double kT) {
  if (kT <= 0) return omega;
  return 2.0 * kT * x_coth_x(omega / (2.0 * kT));
}

double integrate_checked(const std::function<double(double)>& f, double upper, double rel_tol,
                         const char* what, double t) {
  using boost::math::quadrature::gauss_kronrod;
  double error = 0, l1 = 0;
  const double value = gauss_kronrod<double, 31>::integrate(f, 0.0, upper, 25, rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > 10.0 * rel_tol * std::max(l1, 1e-300)) {
    std::ostringstream msg;
    msg << "phi: " << what << " quadrature did not converge at t = " << t << " (error estimate "
        << error << ", L1 norm " << l1 << ", requested rel tol " << rel_tol << ")";
    throw SolverError(msg.str());
  }
  return value;
}

}  // namespace

void PhononParams::validate() const {
  if (!(alpha_p >= 0)) throw ConfigError("phonon.alpha_p must be >= 0");
  if (!(omega_b > 0)) throw ConfigError("phonon.omega_b must be > 0");
  if (!(temperature >= 0)) throw ConfigError("phonon.temperature must be >= 0");
  if (!(xx_scaling >= 0)) throw ConfigError("phonon.xx_scaling must be >= 0");
}

double spectral_density(double omega, const PhononParams& p) {
  const double alpha = units::ps2_to_internal(p.alpha_p);
  return alpha * omega * omega * omega * std::exp(-omega * omega / (2 * p.omega_b * p.omega_b));
}

std::complex<double> phi(double t, const PhononParams& p, double rel_tol) {
  p.validate();
  if (t < 0) throw ConfigError("phi: t must be >= 0");
  if (p.alpha_p == 0) return {0, 0};
  const double alpha = units::ps2_to_internal(p.alpha_p);
  const double kT = units::thermal_energy(p.temperature);
  const double wb2 = p.omega_b * p.omega_b;
  // J(w)/w^2 = alpha w exp(-w^2 / 2 w_b^2); the w -> 0 limit of the thermal factor is finite.
  auto re = [&](double w) { return alpha * std::exp(-w * w / (2 * wb2)) * thermal_weight(w, kT) * std::cos(w * t); };
  auto im = [&](double w) { return -alpha * w * std::exp(-w * w / (2 * wb2)) * std::sin(w * t); };
  const double upper = kCutoffMultiple * p.omega_b;
  const double real_part = integrate_checked(re, upper, rel_tol, "real part", t);
  const double imag_part = t == 0 ? 0.0 : integrate_checked(im, upper, rel_tol, "imaginary part", t);
  return {real_part, imag_part};
}

double bracket_b(const PhononParams& p) { return std::exp(-phi(0.0, p).real() / 2); }

std::vector<std::complex<double>> PhononKernels::correlation(PolaronChannel channel, double da,
                                                             double db) const {
  const double prefactor = bracket_b_scaled(da) * bracket_b_scaled(db);
  const double prod = da * db;
  std::vector<cd> out(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const cd x = prod * phi[k];
    out[k] = channel == PolaronChannel::Gerade ? prefactor * (std::cosh(x) - 1.0) : prefactor * std::sinh(x);
  }
  return out;
}

PhononKernels tabulate_phonon_kernels(const PhononParams& p, double tail_tol) {
  p.validate();
  PhononKernels k;
  k.params = p;
  k.phi0 = phi(0.0, p).real();
  k.bracket_b = std::exp(-k.phi0 / 2);
  k.tau.push_back(0.0);
  k.phi.push_back(k.phi0);
  if (p.alpha_p == 0) return k;

  // Fine uniform steps over the fastest bath time scale, then geometric growth through the tail.
  const double rate = std::max(p.omega_b, 2 * M_PI * units::thermal_energy(p.temperature));
  const double h = 0.02 / rate;
  const double uniform_end = 8.0 / rate;
  constexpr double growth = 1.02;
  constexpr int consecutive_needed = 5;
  constexpr std::size_t max_points = 50000;

  int below = 0;
  double t = 0;
  while (below < consecutive_needed) {
    t = t < uniform_end ? t + h : t * growth;
    const cd value = phi(t, p);
    k.tau.push_back(t);
    k.phi.push_back(value);
    below = std::abs(value) < tail_tol ? below + 1 : 0;
    if (k.tau.size() > max_points) {
      std::ostringstream msg;
      msg << "phonon kernels: |phi(tau)| did not fall below " << tail_tol << " within " << max_points
          << " grid points (tau = " << t << " 1/ueV)";
      throw SolverError(msg.str());
    }
  }
  return k;
}

std::shared_ptr<const PhononKernels> cached_phonon_kernels(const PhononParams& p) {
  using Key = std::tuple<double, double, double, double>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const PhononKernels>> cache;
  const Key key{p.alpha_p, p.omega_b, p.temperature, p.xx_scaling};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto kernels = std::make_shared<const PhononKernels>(tabulate_phonon_kernels(p));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(kernels)).first->second;
}

std::complex<double> one_sided_transform(std::span<const double> tau, std::span<const cd> values,
                                         double nu) {
  if (tau.size() != values.size()) throw ConfigError("one_sided_transform: grid/value size mismatch");
  const cd i(0, 1);
  cd total = 0;
  for (std::size_t k = 0; k + 1 < tau.size(); ++k) {
    const double h = tau[k + 1] - tau[k];
    const double theta = nu * h;
    cd m0, m1;  // int_0^1 e^{-i theta s} ds,  int_0^1 s e^{-i theta s} ds
    if (std::abs(theta) < 1e-3) {
      const double t2 = theta * theta;
      m0 = cd(1.0 - t2 / 6.0 + t2 * t2 / 120.0, -theta / 2.0 + theta * t2 / 24.0);
      m1 = cd(0.5 - t2 / 8.0 + t2 * t2 / 144.0, -theta / 3.0 + theta * t2 / 30.0);
    } else {
      const cd e = std::exp(-i * theta);
      m0 = (1.0 - e) / (i * theta);
      m1 = (e * (1.0 + i * theta) - 1.0) / (theta * theta);
    }
    total += std::exp(-i * (nu * tau[k])) * h * (values[k] * (m0 - m1) + values[k + 1] * m1);
  }
  return total;
}

MatrixXc polaron_dissipator(const MatrixXc& h_system, std::span<const PhononCoupling> couplings,
                            const PhononKernels& kernels) {
  const Eigen::Index dim = h_system.rows();
  MatrixXc out = MatrixXc::Zero(dim * dim, dim * dim);
  if (kernels.params.alpha_p == 0 || couplings.empty()) return out;
  if (hermiticity_error(h_system) > 1e-12) throw ConfigError("polaron_dissipator: system Hamiltonian is not Hermitian");

  // Couplings with equal displacement share one bath operator.
  std::vector<double> displacement;
  std::vector<MatrixXc> raising;
  for (const auto& c : couplings) {
    if (c.raising.rows() != dim || c.raising.cols() != dim)
      throw ConfigError("polaron_dissipator: coupling dimension mismatch");
    auto it = std::find(displacement.begin(), displacement.end(), c.displacement);
    if (it == displacement.end()) {
      displacement.push_back(c.displacement);
      raising.push_back(c.raising);
    } else {
      raising[static_cast<std::size_t>(it - displacement.begin())] += c.raising;
    }
  }

  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h_system);
  const MatrixXc& u = es.eigenvectors();
  const Eigen::VectorXd& energy = es.eigenvalues();
  const cd i(0, 1);

  for (PolaronChannel channel : {PolaronChannel::Gerade, PolaronChannel::Ungerade}) {
    std::vector<MatrixXc> x_ops;
    for (const auto& p : raising)
      x_ops.push_back(channel == PolaronChannel::Gerade ? MatrixXc(p + p.adjoint()) : MatrixXc(i * (p - p.adjoint())));

    for (std::size_t a = 0; a < x_ops.size(); ++a) {
      for (std::size_t b = 0; b < x_ops.size(); ++b) {
        const auto g = kernels.correlation(channel, displacement[a], displacement[b]);
        // Y = int_0^inf G(tau) X_b(-tau) dtau, element-wise in the energy eigenbasis.
        MatrixXc y = u.adjoint() * x_ops[b] * u;
        for (Eigen::Index j = 0; j < dim; ++j)
          for (Eigen::Index l = 0; l < dim; ++l)
            if (y(j, l) != cd(0)) y(j, l) *= one_sided_transform(kernels.tau, g, energy(j) - energy(l));
        y = u * y * u.adjoint();

        const MatrixXc& xa = x_ops[a];
        const MatrixXc yd = y.adjoint();
        out -= left_multiply<double>(xa * y) - sandwich<double>(y, xa);
        out -= right_multiply<double>(yd * xa) - sandwich<double>(xa, yd);
      }
    }
  }
  return out;
}

}  // namespace qdc
