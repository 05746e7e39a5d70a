#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "qdc/config_io.hpp"
#include "qdc/system.hpp"

namespace qdc {

/// Rows follow axis1 in input order, columns follow axis2.
struct SweepMap {
  std::string axis1_name;        // "omega" or "laser_detuning"
  std::string axis2_reference;   // "laser" (offsets from w_L) or "x-cavity" (offsets from w_c^x)
  std::vector<double> axis1;
  std::vector<double> axis2;
  Eigen::MatrixXd values;
  SweepSettings::Normalization normalization = SweepSettings::Normalization::PerRow;
  std::vector<double> row_scale;             // factor applied to each raw row
  std::vector<SolveDiagnostics> diagnostics;
  double most_negative = 0;                  // lowest raw value relative to the map maximum; clipped to zero
  std::string config_hash;                   // of the base config

  void check_invariants() const;
};

struct SweepOptions {
  int threads = 1;
  SweepSettings::Normalization normalization = SweepSettings::Normalization::PerRow;
};

/// One spectrum per drive amplitude; each row overrides the drive with omega = value.
SweepMap power_sweep(const SystemConfig& base, const std::vector<double>& omega_values, const SweepOptions& opts = {});

/// One spectrum per laser detuning w_L - w_c^x at fixed cavity drive omega. The emission axis
/// is measured from the x-cavity so the rows share absolute energies.
SweepMap detuning_sweep(const SystemConfig& base, double omega, const std::vector<double>& laser_detunings,
                        const SweepOptions& opts = {});

/// Drive amplitudes 0 .. omega_for_splitting(max_splitting), evenly spaced.
std::vector<double> power_axis(const SystemConfig& base, double max_splitting, int points);

/// Symmetric detuning axis over [-span, +span].
std::vector<double> detuning_axis(double span, int points);

struct PhononComparison {
  SpectrumResult with_phonons;
  SpectrumResult without_phonons;
  SystemConfig with_config;     // as solved: drive fixed to the calibrated omega
  SystemConfig without_config;
};

/// Same config solved with and without the phonon bath, each normalized by the same rule.
PhononComparison phonon_comparison(const SystemConfig& base);

}  // namespace qdc
