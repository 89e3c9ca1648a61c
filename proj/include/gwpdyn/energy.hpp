#pragma once

#include "gwpdyn/gaussian.hpp"
#include "gwpdyn/potentials.hpp"

namespace gwp {

struct EnergyParts {
  double kinetic = 0.0;
  double potential = 0.0;
  double total() const { return kinetic + potential; }
};

/// <T> + <V> of a normalized state; fails with not_normalized otherwise.
EnergyParts energy(const GaussianState& g, const Potential& pot, const MassSpec& ms);
/// Same formula without the normalization check (expectation in the
/// normalized density of the state).
EnergyParts expectation_energy(const GaussianState& g, const Potential& pot, const MassSpec& ms);
/// p^T m^-1 p / 2 + V(q).
double classical_energy(const Vec& q, const Vec& p, const Potential& pot, const MassSpec& ms);

}  // namespace gwp
