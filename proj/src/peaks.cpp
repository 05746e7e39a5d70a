#include "qdc/peaks.hpp"

#include <algorithm>
#include <cmath>

namespace qdc {

std::vector<double> PeakReport::positions() const {
  std::vector<double> out;
  out.reserve(peaks.size());
  for (const auto& p : peaks) out.push_back(p.position);
  return out;
}

namespace {

// Prominence of the maximum at index k: height above the higher of the two minima separating
// it from the nearest higher sample on each side (or from the boundary).
double prominence_at(std::span<const double> y, std::size_t k) {
  const double h = y[k];
  double left_min = h;
  for (std::size_t j = k; j-- > 0;) {
    if (y[j] > h) break;
    left_min = std::min(left_min, y[j]);
  }
  double right_min = h;
  for (std::size_t j = k + 1; j < y.size(); ++j) {
    if (y[j] > h) break;
    right_min = std::min(right_min, y[j]);
  }
  return h - std::max(left_min, right_min);
}

std::vector<double> neighbour_gaps(const std::vector<double>& xs) {
  std::vector<double> out;
  for (std::size_t k = 1; k < xs.size(); ++k) out.push_back(xs[k] - xs[k - 1]);
  return out;
}

}  // namespace

PeakReport extract_peaks(std::span<const double> omega, std::span<const double> y, double min_prominence,
                         double cluster_gap) {
  if (omega.size() != y.size()) throw ConfigError("extract_peaks: grid and intensity sizes differ");
  PeakReport report;
  if (y.size() < 3) return report;
  const double top = *std::max_element(y.begin(), y.end());
  if (!(top > 0)) return report;
  const double threshold = min_prominence * top;

  for (std::size_t k = 1; k + 1 < y.size(); ++k) {
    if (!(y[k] > y[k - 1])) continue;
    // Flat tops: accept the left edge of a plateau that eventually descends.
    std::size_t r = k;
    while (r + 1 < y.size() && y[r + 1] == y[k]) ++r;
    if (r + 1 >= y.size() || !(y[r + 1] < y[k])) continue;
    const std::size_t mid = (k + r) / 2;
    const double prom = prominence_at(y, k);
    if (prom >= threshold) report.peaks.push_back({omega[mid], y[k], prom});
    k = r;
  }

  std::vector<double> x_side, xx_side;
  for (const auto& p : report.peaks) {
    if (p.position > cluster_gap) x_side.push_back(p.position);
    if (p.position < -cluster_gap) xx_side.push_back(p.position);
    (p.position < 0 ? report.left_sum : report.right_sum) += p.height;
  }
  report.x_side_splittings = neighbour_gaps(x_side);
  report.xx_side_splittings = neighbour_gaps(xx_side);
  return report;
}

PeakReport extract_peaks(const SpectrumResult& spec, double min_prominence, double cluster_gap) {
  return extract_peaks(std::span<const double>(spec.omega), std::span<const double>(spec.intensity), min_prominence,
                       cluster_gap);
}

double integrate_window(const SpectrumResult& spec, double lo, double hi) {
  double sum = 0;
  for (std::size_t k = 1; k < spec.omega.size(); ++k) {
    const double a = std::max(lo, spec.omega[k - 1]);
    const double b = std::min(hi, spec.omega[k]);
    if (b <= a) continue;
    // Linear interpolation of the integrand across the clipped cell.
    const double w = spec.omega[k] - spec.omega[k - 1];
    auto at = [&](double x) {
      const double t = (x - spec.omega[k - 1]) / w;
      return (1 - t) * spec.intensity[k - 1] + t * spec.intensity[k];
    };
    sum += 0.5 * (at(a) + at(b)) * (b - a);
  }
  return sum;
}

std::vector<double> line_intensities(const SpectrumResult& spec, const DressedSolution& dressed, double half_width) {
  std::vector<double> out;
  for (const auto& line : dressed.lines)
    out.push_back(integrate_window(spec, line.offset - half_width, line.offset + half_width));
  return out;
}

}  // namespace qdc
