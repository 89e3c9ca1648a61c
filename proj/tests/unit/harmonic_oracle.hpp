#pragma once

// Closed-form Gaussian dynamics in V = omega^2 |x|^2 / 2 with unit masses.

#include <cmath>

#include "gwpdyn/gaussian.hpp"

namespace oracle {

inline gwp::HagedornGaussian harmonic_exact(const gwp::HagedornGaussian& g0, double omega, double t) {
  using gwp::cplx;
  const double c = std::cos(omega * t), s = std::sin(omega * t);
  gwp::HagedornGaussian g = g0;
  g.q = g0.q * c + g0.p * (s / omega);
  g.p = -g0.q * (omega * s) + g0.p * c;
  g.Q = g0.Q * c + g0.P * (s / omega);
  g.P = -g0.Q * (omega * s) + g0.P * c;
  // d(pq)/dt = 2L for a harmonic oscillator
  g.S = g0.S + 0.5 * (g.p.dot(g.q) - g0.p.dot(g0.q));
  // log det Q followed continuously by fine sampling
  const int samples = 200 + static_cast<int>(400.0 * std::abs(omega * t));
  cplx ld = g0.log_det_q;
  gwp::CMat prev = g0.Q;
  for (int k = 1; k <= samples; ++k) {
    const double tk = t * k / samples;
    const gwp::CMat qk = g0.Q * std::cos(omega * tk) + g0.P * (std::sin(omega * tk) / omega);
    ld += std::log((prev.partialPivLu().solve(qk)).determinant());
    prev = qk;
  }
  g.log_det_q = ld;
  return g;
}

}  // namespace oracle
