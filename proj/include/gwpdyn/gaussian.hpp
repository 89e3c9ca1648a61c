#pragma once

#include <variant>
#include <vector>

#include "gwpdyn/linalg.hpp"

namespace gwp {

struct MassSpec {
  Mat m;
  Mat m_inv;
  double hbar = 1.0;

  static MassSpec make(const Mat& m, double hbar);
  static MassSpec scalar(int dim, double mass, double hbar);

  int dim() const { return static_cast<int>(m.rows()); }
  /// p^T m^-1 p / 2
  double kinetic(const Vec& p) const { return 0.5 * p.dot(m_inv * p); }
};

/// psi(x) = exp{(i/hbar)[(x-q)^T A (x-q)/2 + p^T (x-q) + gamma]}
struct HellerGaussian {
  Vec q;
  Vec p;
  CMat a;
  cplx gamma;

  int dim() const { return static_cast<int>(q.size()); }
};

/// psi(x) = (pi hbar)^{-D/4} (det Q)^{-1/2}
///          exp{(i/hbar)[(x-q)^T P Q^-1 (x-q)/2 + p^T (x-q) + S]}
///
/// log_det_q is the branch of log det Q followed continuously from the
/// initial state; it fixes the sign of (det Q)^{-1/2}.
struct HagedornGaussian {
  Vec q;
  Vec p;
  CMat Q;
  CMat P;
  double S = 0.0;
  cplx log_det_q;

  int dim() const { return static_cast<int>(q.size()); }
};

using GaussianState = std::variant<HellerGaussian, HagedornGaussian>;

int state_dim(const GaussianState& g);
const Vec& state_q(const GaussianState& g);
const Vec& state_p(const GaussianState& g);

/// Heller state with gamma chosen for unit norm.
HellerGaussian make_normalized_heller(const Vec& q, const Vec& p, const CMat& a, double phase,
                                      double hbar);
/// Principal-branch log det Q from LU.
cplx log_det_lu(const CMat& m);

void validate(const HellerGaussian& g);
void validate(const HagedornGaussian& g, double tol = 1e-10);
/// Max-abs residuals of Q^T P - P^T Q and Q^dag P - P^dag Q - 2i I.
double hagedorn_symmetry_residual(const HagedornGaussian& g);
double hagedorn_symplectic_residual(const HagedornGaussian& g);

double norm_heller(const HellerGaussian& g, const MassSpec& ms);
double norm_hagedorn(const HagedornGaussian& g, double hbar);
double norm(const GaussianState& g, const MassSpec& ms);
/// log of the norm; avoids overflow and keeps differences accurate.
double log_norm_heller(const HellerGaussian& g, double hbar);

struct Covariances {
  Mat sigma;
  Mat pi;
};
Covariances covariances(const HellerGaussian& g, double hbar);
Covariances covariances(const HagedornGaussian& g, double hbar);
Covariances covariances(const GaussianState& g, double hbar);
Mat position_covariance(const GaussianState& g, double hbar);

/// Isserlis: S_jk S_lm + S_jl S_km + S_jm S_kl.
double fourth_moment(const Mat& sigma, int j, int k, int l, int m);

HagedornGaussian heller_to_hagedorn(const HellerGaussian& g, const MassSpec& ms);
HellerGaussian hagedorn_to_heller(const HagedornGaussian& g, const MassSpec& ms);
HellerGaussian as_heller(const GaussianState& g, const MassSpec& ms);

/// Width matrix A of either parametrization (P Q^-1 for Hagedorn).
CMat width_matrix(const GaussianState& g);

cplx overlap(const HellerGaussian& g1, const HellerGaussian& g2, double hbar);
cplx overlap(const HagedornGaussian& g1, const HagedornGaussian& g2, double hbar);
cplx overlap(const GaussianState& g1, const GaussianState& g2, const MassSpec& ms);

double distance(const HellerGaussian& g1, const HellerGaussian& g2, double hbar);
double distance(const GaussianState& g1, const GaussianState& g2, const MassSpec& ms);

std::vector<cplx> evaluate_wavefunction(const HellerGaussian& g, const std::vector<Vec>& points,
                                        double hbar);
std::vector<cplx> evaluate_wavefunction(const HagedornGaussian& g,
                                        const std::vector<Vec>& points, double hbar);
std::vector<cplx> evaluate_wavefunction(const GaussianState& g, const std::vector<Vec>& points,
                                        const MassSpec& ms);

}  // namespace gwp
