#pragma once

#include <memory>
#include <vector>

#include "gwpdyn/gaussian.hpp"
#include "gwpdyn/potentials.hpp"

namespace gwp {

/// Uniform periodic grid; point k on an axis sits at lo + k (hi - lo)/n.
struct GridSpec {
  std::vector<int> n;
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(n.size()); }
  long size() const;
  double spacing(int axis) const { return (hi[axis] - lo[axis]) / n[axis]; }
  double cell_volume() const;
  void validate() const;
  /// Coordinates of flat point index (axis 0 varies slowest).
  Vec point(long index) const;
};

struct GridState {
  std::vector<cplx> psi;
  GridSpec spec;
  double t = 0.0;
};

/// Samples a Gaussian, rescaled to its analytic norm. Fails if the Gaussian
/// exceeds 1e-6 in magnitude on the box boundary.
GridState grid_init(const GaussianState& g, const GridSpec& spec, const MassSpec& ms);

/// Strang split-operator Fourier propagator e^{-iV dt/2} e^{-iT dt} e^{-iV dt/2}.
class GridPropagator {
 public:
  GridPropagator(const GridSpec& spec, const Potential& pot, const MassSpec& ms, double dt);
  ~GridPropagator();
  GridPropagator(const GridPropagator&) = delete;
  GridPropagator& operator=(const GridPropagator&) = delete;

  void step(GridState& s) const;
  void run(GridState& s, long n_steps) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct GridObservables {
  double norm = 0.0;
  double energy = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  Vec mean_q;
};

GridObservables grid_observables(const GridState& s, const Potential& pot, const MassSpec& ms);
/// Trapezoidal <g|psi> on the grid.
cplx grid_overlap(const GridState& s, const GaussianState& g, const MassSpec& ms);
/// Discrete L2 norm of psi_a - psi_b.
double grid_l2_difference(const GridState& a, const GridState& b);
/// Discrete L2 norm of psi - g sampled on the grid.
double grid_l2_difference(const GridState& s, const GaussianState& g, const MassSpec& ms);

}  // namespace gwp
