#pragma once

#include <span>
#include <vector>

#include "qdc/dressed.hpp"
#include "qdc/system.hpp"

namespace qdc {

struct Peak {
  double position = 0;    // offset from w_L (ueV)
  double height = 0;
  double prominence = 0;  // absolute
};

/// Peaks sorted by position. Clusters are the peaks further than `cluster_gap` from w_L on
/// either side; splittings are between neighbours inside a cluster.
struct PeakReport {
  std::vector<Peak> peaks;
  std::vector<double> xx_side_splittings;  // offsets < -cluster_gap
  std::vector<double> x_side_splittings;   // offsets > +cluster_gap
  double left_sum = 0;                     // summed heights of peaks below w_L
  double right_sum = 0;

  std::vector<double> positions() const;
  std::size_t count() const { return peaks.size(); }
};

inline constexpr double kDefaultProminence = 0.01;
inline constexpr double kClusterGap = 500.0;

/// Local maxima whose topographic prominence exceeds `min_prominence` times the global maximum.
PeakReport extract_peaks(std::span<const double> omega, std::span<const double> intensity,
                         double min_prominence = kDefaultProminence, double cluster_gap = kClusterGap);
PeakReport extract_peaks(const SpectrumResult& spec, double min_prominence = kDefaultProminence,
                         double cluster_gap = kClusterGap);

/// Trapezoid integral of the spectrum over [lo, hi].
double integrate_window(const SpectrumResult& spec, double lo, double hi);

/// Integrated intensity in a window of +-half_width around each catalog line (same order as lines).
std::vector<double> line_intensities(const SpectrumResult& spec, const DressedSolution& dressed, double half_width);

}  // namespace qdc
