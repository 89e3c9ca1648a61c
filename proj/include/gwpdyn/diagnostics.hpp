#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "gwpdyn/propagators.hpp"

namespace gwp {

/// Phase-space coordinates z = (q, p, vec Re Q, vec Re P, vec Im Q, vec Im P)
/// with column-major vectorization.
int flat_size(int dim);
Vec flatten(const HagedornGaussian& g);
/// Inverse of flatten; S and log_det_q are copied from `like`.
HagedornGaussian unflatten(const Vec& z, const HagedornGaussian& like);

/// blockdiag(J_2D, (hbar/2) J_2D^2, (hbar/2) J_2D^2) with J = [[0, I], [-I, 0]].
Mat symplectic_form(int dim, double hbar);

Mat kinetic_jacobian(double t, const MassSpec& ms, int dim);

/// Derivatives of the flow coefficients: V2, dV1/dSigma, dV2/dq, dV2/dSigma.
struct CoefficientJet {
  Mat v2;
  Tensor3 dv1_dsigma;
  Tensor3 dv2_dq;
  Tensor4 dv2_dsigma;
};
CoefficientJet coefficient_jet(const Dynamics& dyn, const Vec& q, const Mat& sigma);

/// Generator K of the potential flow Jacobian I - tK.
Mat potential_generator(const HagedornGaussian& g, const Dynamics& dyn);
Mat potential_jacobian(const HagedornGaussian& g, double t, const Dynamics& dyn);
/// max |B K - (B K)^T|; zero iff every potential flow is symplectic.
double potential_symplectic_condition(const Mat& generator, const Mat& b);

/// Central differences of a map of flat coordinates, step h = rel_h * max(1, |z_i|).
Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& map, const Vec& z,
                               double rel_h = 1e-6);
/// Jacobian of one integrator step by finite differences.
Mat step_jacobian_fd(const HagedornGaussian& g, double dt, const IntegratorSpec& spec,
                     const Dynamics& dyn);
/// Jacobian of one splitting step as the product of analytic substep Jacobians.
Mat step_jacobian_analytic(const HagedornGaussian& g, double dt, const IntegratorSpec& spec,
                           const Dynamics& dyn, HagedornGaussian* next = nullptr);

/// || J^T B J - B ||_F
double symplecticity_defect(const Mat& jac, const Mat& b);

enum class JacobianMode { analytic, finite_difference, both };

struct SymplecticitySeries {
  std::vector<double> times;
  std::vector<double> defects;
  /// Relative Frobenius difference of analytic and finite-difference chains;
  /// filled only in mode `both`.
  std::vector<double> chain_differences;
  Counters counters;
};

/// Analytic chains are used for splitting specs; RK4 always uses finite
/// differences.
SymplecticitySeries symplecticity_series(const GaussianState& g0, const IntegratorSpec& spec,
                                         const Dynamics& dyn, double dt, long n_steps,
                                         long stride, JacobianMode mode = JacobianMode::analytic);

/// d(psi_FB, psi_0) after n steps with dt and n steps with -dt.
double reversibility_defect(const GaussianState& g0, const IntegratorSpec& spec,
                            const Dynamics& dyn, double dt, long n);

/// d(psi(t_f; dt), psi(t_f; dt/2)).
double convergence_error(const GaussianState& g0, const IntegratorSpec& spec, const Dynamics& dyn,
                         double dt, double t_final, Counters* counters = nullptr);

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points_used = 0;
};
/// Least-squares log-log slope over points with plateau < err <= ceiling.
OrderFit order_fit(const std::vector<std::pair<double, double>>& points, double plateau,
                   double ceiling = std::numeric_limits<double>::infinity());
/// Plateau level 100 * eps * scale.
double roundoff_plateau(double scale);

struct ConservationRow {
  double time = 0.0;
  double energy = 0.0;
  double energy_error = 0.0;
  double norm_error = 0.0;
  double classical_energy = 0.0;
  double effective_energy = 0.0;
};
std::vector<ConservationRow> conservation_series(const PropagationRecord& rec,
                                                 const Dynamics& dyn);

}  // namespace gwp
