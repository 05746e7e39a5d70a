#include "qdc/units.hpp"

#include "qdc/errors.hpp"

namespace qdc::units {

double kappa_from_quality(double quality, double mode_energy_eV) {
  if (!(quality > 0.0) || !(mode_energy_eV > 0.0))
    throw ConfigError("kappa_from_quality: quality factor and mode energy must be positive");
  return mode_energy_eV * 1e6 / quality;
}

}  // namespace qdc::units
