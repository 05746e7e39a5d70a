#include "qdc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <thread>

namespace qdc {

void SweepMap::check_invariants() const {
  if (values.rows() != static_cast<Eigen::Index>(axis1.size()) ||
      values.cols() != static_cast<Eigen::Index>(axis2.size()))
    throw SolverError("sweep map: matrix is " + std::to_string(values.rows()) + "x" + std::to_string(values.cols()) +
                      " but axes are " + std::to_string(axis1.size()) + " and " + std::to_string(axis2.size()));
  if (!values.allFinite()) throw SolverError("sweep map: non-finite intensity");
  if (values.size() > 0 && values.minCoeff() < 0) throw SolverError("sweep map: negative intensity");
}

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Runs row(i) for i in [0, n) on a small worker pool. Results keep input order; the failure
// with the lowest index is rethrown with its axis value attached.
std::vector<SpectrumResult> run_rows(std::size_t n, int threads, const std::function<SpectrumResult(std::size_t)>& row,
                                     const std::string& axis_name, const std::vector<double>& axis) {
  std::vector<SpectrumResult> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        out[i] = row(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, 256));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(workers, n); ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    const std::string where = "sweep failed at " + axis_name + "=" + format_value(axis[i]) + ": ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    } catch (const std::exception& e) {
      throw SolverError(where + e.what());
    }
  }
  return out;
}

void assemble(SweepMap& map, const std::vector<SpectrumResult>& rows) {
  const auto nr = static_cast<Eigen::Index>(rows.size());
  const auto nc = static_cast<Eigen::Index>(map.axis2.size());
  Eigen::MatrixXd raw(nr, nc);
  for (Eigen::Index r = 0; r < nr; ++r)
    raw.row(r) = Eigen::Map<const Eigen::RowVectorXd>(rows[static_cast<std::size_t>(r)].intensity.data(), nc);

  const double global_max = raw.size() > 0 ? raw.maxCoeff() : 0.0;
  const double global_scale = global_max > 0 ? 1.0 / global_max : 1.0;
  map.most_negative = global_max > 0 ? std::min(0.0, raw.minCoeff()) / global_max : 0.0;

  map.row_scale.assign(rows.size(), global_scale);
  if (map.normalization == SweepSettings::Normalization::PerRow) {
    for (Eigen::Index r = 0; r < nr; ++r) {
      const double row_max = raw.row(r).maxCoeff();
      // Dark rows keep the global scale instead of amplifying round-off.
      if (row_max > 1e-12 * global_max) map.row_scale[static_cast<std::size_t>(r)] = 1.0 / row_max;
    }
  }
  map.values.resize(nr, nc);
  for (Eigen::Index r = 0; r < nr; ++r)
    map.values.row(r) = (raw.row(r) * map.row_scale[static_cast<std::size_t>(r)]).cwiseMax(0.0);

  map.diagnostics.clear();
  for (const auto& s : rows) map.diagnostics.push_back(s.diagnostics);
  map.check_invariants();
}

}  // namespace

SweepMap power_sweep(const SystemConfig& base, const std::vector<double>& omega_values, const SweepOptions& opts) {
  if (omega_values.size() < 2) throw ConfigError("power sweep needs at least 2 points");
  base.validate();
  SweepMap map;
  map.axis1_name = "omega";
  map.axis2_reference = "laser";
  map.axis1 = omega_values;
  map.axis2 = omega_grid(base);
  map.normalization = opts.normalization;
  map.config_hash = config_hash(base);

  auto row = [&](std::size_t i) {
    SystemConfig cfg = base;
    cfg.drive = DriveConfig{};
    cfg.drive.omega = omega_values[i];
    cfg.normalize = false;
    return compute_spectrum(build_system(cfg), map.axis2);
  };
  assemble(map, run_rows(omega_values.size(), opts.threads, row, "omega", omega_values));
  return map;
}

SweepMap detuning_sweep(const SystemConfig& base, double omega, const std::vector<double>& laser_detunings,
                        const SweepOptions& opts) {
  if (laser_detunings.size() < 2) throw ConfigError("detuning sweep needs at least 2 points");
  base.validate();
  SweepMap map;
  map.axis1_name = "laser_detuning";
  map.axis2_reference = "x-cavity";
  map.axis1 = laser_detunings;
  map.axis2 = omega_grid(base);
  map.normalization = opts.normalization;
  map.config_hash = config_hash(base);

  auto row = [&](std::size_t i) {
    SystemConfig cfg = base;
    cfg.drive = DriveConfig{};
    cfg.drive.omega = omega;
    cfg.laser_detuning = laser_detunings[i];
    cfg.normalize = false;
    std::vector<double> offsets(map.axis2.size());
    for (std::size_t k = 0; k < offsets.size(); ++k) offsets[k] = map.axis2[k] - laser_detunings[i];
    return compute_spectrum(build_system(cfg), std::move(offsets));
  };
  assemble(map, run_rows(laser_detunings.size(), opts.threads, row, "laser_detuning", laser_detunings));
  return map;
}

std::vector<double> power_axis(const SystemConfig& base, double max_splitting, int points) {
  if (points < 2) throw ConfigError("power sweep needs at least 2 points");
  const double top = omega_for_splitting(base, max_splitting);
  std::vector<double> axis(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) axis[static_cast<std::size_t>(k)] = top * k / (points - 1);
  return axis;
}

std::vector<double> detuning_axis(double span, int points) {
  if (points < 2) throw ConfigError("detuning sweep needs at least 2 points");
  if (!(span > 0)) throw ConfigError("detuning span must be > 0");
  std::vector<double> axis(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) axis[static_cast<std::size_t>(k)] = -span + 2.0 * span * k / (points - 1);
  return axis;
}

PhononComparison phonon_comparison(const SystemConfig& base) {
  base.validate();
  SystemConfig fixed = base;
  if (base.drive.splitting) {
    // Calibrate once so both runs see the same cavity drive.
    fixed.drive = DriveConfig{};
    fixed.drive.omega = omega_for_splitting(base, *base.drive.splitting);
  }
  SystemConfig on = fixed;
  on.phonon.enable = true;
  SystemConfig off = fixed;
  off.phonon.enable = false;
  return {compute_spectrum(on), compute_spectrum(off), on, off};
}

}  // namespace qdc
