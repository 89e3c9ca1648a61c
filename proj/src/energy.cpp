#include "gwpdyn/energy.hpp"

#include <cmath>

#include "gwpdyn/errors.hpp"

namespace gwp {

EnergyParts expectation_energy(const GaussianState& g, const Potential& pot, const MassSpec& ms) {
  const Covariances cov = covariances(g, ms.hbar);
  const Vec& q = state_q(g);
  const Vec& p = state_p(g);
  EnergyParts e;
  e.kinetic = ms.kinetic(p) + 0.5 * (ms.m_inv.cwiseProduct(cov.pi)).sum();
  e.potential = pot.moments(q, cov.sigma, 0).v0;
  return e;
}

EnergyParts energy(const GaussianState& g, const Potential& pot, const MassSpec& ms) {
  if (std::abs(norm(g, ms) - 1.0) > 1e-8)
    fail(ErrorCode::not_normalized, "energy requires a normalized state");
  return expectation_energy(g, pot, ms);
}

double classical_energy(const Vec& q, const Vec& p, const Potential& pot, const MassSpec& ms) {
  return ms.kinetic(p) + pot.value(q);
}

}  // namespace gwp
