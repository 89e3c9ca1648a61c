#pragma once

#include <string>
#include <vector>

#include "gwpdyn/gaussian.hpp"
#include "gwpdyn/potentials.hpp"

namespace gwp {

enum class MethodKind { vga, tga, ha };
enum class Base { vtv, tvt, rk4 };
enum class Scheme { none, triple_jump, suzuki, optimal };
enum class Parametrization { heller, hagedorn };

const char* to_string(MethodKind k);
const char* to_string(Base b);
const char* to_string(Scheme s);
const char* to_string(Parametrization p);

/// (V0, V1, V2) of the effective quadratic potential driving the Gaussian.
struct Coefficients {
  double v0 = 0.0;
  Vec v1;
  Mat v2;
};

struct Counters {
  long potential_evaluations = 0;
  long substeps = 0;
};

/// Potential, masses and approximation method.
class Dynamics {
 public:
  Dynamics(PotentialPtr pot, MassSpec ms, MethodKind method, Vec ha_ref = {});

  const Potential& potential() const { return *pot_; }
  const PotentialPtr& potential_ptr() const { return pot_; }
  const MassSpec& mass() const { return ms_; }
  MethodKind method() const { return method_; }
  const Vec& ha_reference() const { return ha_ref_; }
  /// Value, gradient and Hessian of V at the HA reference geometry.
  const Derivatives& ha_jet() const { return ha_jet_; }
  int dim() const { return pot_->dim(); }

  Coefficients coefficients(const Vec& q, const Mat& sigma) const;
  /// Harmonic-approximation potential V_HA(q).
  double ha_value(const Vec& q) const;
  /// <T> + V0 + Tr(V2 Sigma)/2.
  double effective_energy(const GaussianState& g) const;

 private:
  PotentialPtr pot_;
  MassSpec ms_;
  MethodKind method_;
  Vec ha_ref_;
  Derivatives ha_jet_;
};

struct IntegratorSpec {
  Base base = Base::tvt;
  Scheme scheme = Scheme::none;
  int order = 2;
  Parametrization parametrization = Parametrization::hagedorn;
  /// Merge adjacent substeps of the same kind.
  bool fuse = false;

  void validate() const;
  bool symplectic() const { return base != Base::rk4; }
  /// e.g. "tvt-optimal-8", "vtv-2", "rk4".
  std::string label() const;
  static IntegratorSpec from_label(const std::string& label, Parametrization p);
};

struct CompositionLevel {
  std::vector<double> gammas;
  int source_order = 2;
  int target_order = 4;
};

/// Levels applied from the innermost outwards; optimal schemes return one
/// table level from order 2.
std::vector<CompositionLevel> composition_coefficients(Scheme scheme, int target_order);

enum class FlowKind { kinetic, potential };

struct Substep {
  FlowKind kind;
  double fraction;
};

/// Flattened sequence of exact flows making one step of a splitting spec.
std::vector<Substep> substep_program(const IntegratorSpec& spec);

HellerGaussian kinetic_flow_heller(const HellerGaussian& g, double t, const MassSpec& ms);
HagedornGaussian kinetic_flow_hagedorn(const HagedornGaussian& g, double t, const MassSpec& ms);
HellerGaussian potential_flow_heller(const HellerGaussian& g, double t, const Coefficients& c);
HagedornGaussian potential_flow_hagedorn(const HagedornGaussian& g, double t,
                                         const Coefficients& c);

/// Applies one flow of length fraction*dt, recomputing coefficients for
/// potential flows.
GaussianState apply_substep(const GaussianState& g, const Substep& s, double dt,
                            const Dynamics& dyn, Counters* counters = nullptr);

GaussianState second_order_step(const GaussianState& g, double dt, Base base, const Dynamics& dyn,
                                Counters* counters = nullptr);
GaussianState rk4_step(const GaussianState& g, double dt, const Dynamics& dyn,
                       Counters* counters = nullptr);
/// One step of any spec; the state's parametrization is kept.
GaussianState step(const GaussianState& g, double dt, const IntegratorSpec& spec,
                   const Dynamics& dyn, Counters* counters = nullptr);

/// Converts to the parametrization requested by the spec.
GaussianState to_parametrization(const GaussianState& g, Parametrization p, const MassSpec& ms);

struct PropagationRecord {
  std::vector<double> times;
  std::vector<GaussianState> states;
  Counters counters;
  double wall_seconds = 0.0;
};

PropagationRecord propagate(const GaussianState& g0, const IntegratorSpec& spec,
                            const Dynamics& dyn, double dt, long n_steps, long stride = 1);

/// Final state only.
GaussianState propagate_final(const GaussianState& g0, const IntegratorSpec& spec,
                              const Dynamics& dyn, double dt, long n_steps,
                              Counters* counters = nullptr);

}  // namespace gwp
