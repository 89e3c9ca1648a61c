#pragma once

#include <memory>
#include <string>

#include "gwpdyn/linalg.hpp"

namespace gwp {

/// Value and derivative tensors up to rank `order`. Tensors above `order` are
/// left empty.
struct Derivatives {
  int order = 0;
  double v0 = 0.0;
  Vec v1;
  Mat v2;
  Tensor3 v3;
  Tensor4 v4;
};

/// Gaussian expectation values <V>, <V'>, <V''>, <V'''>, <V''''>.
using MomentBundle = Derivatives;

class Potential {
 public:
  virtual ~Potential() = default;

  virtual int dim() const = 0;
  virtual std::string kind() const = 0;
  virtual double value(const Vec& q) const = 0;
  virtual Derivatives pointwise(const Vec& q, int order) const = 0;
  /// Exact expectation values in the normalized density centered at q with
  /// position covariance sigma.
  virtual MomentBundle moments(const Vec& q, const Mat& sigma, int order) const = 0;
};

using PotentialPtr = std::shared_ptr<const Potential>;

/// V(q) = c0 + c1.x + c2:xx/2 + c3:xxx/6 + c4:xxxx/24, x = q - q_ref.
class QuarticPotential final : public Potential {
 public:
  QuarticPotential(Vec q_ref, double c0, Vec c1, Mat c2, Tensor3 c3, Tensor4 c4);

  int dim() const override { return static_cast<int>(q_ref_.size()); }
  std::string kind() const override { return "quartic"; }
  double value(const Vec& q) const override;
  Derivatives pointwise(const Vec& q, int order) const override;
  MomentBundle moments(const Vec& q, const Mat& sigma, int order) const override;

  /// Same polynomial re-expanded about a new reference point.
  QuarticPotential recentered(const Vec& q_new) const;

  const Vec& q_ref() const { return q_ref_; }
  double c0() const { return c0_; }
  const Vec& c1() const { return c1_; }
  const Mat& c2() const { return c2_; }
  const Tensor3& c3() const { return c3_; }
  const Tensor4& c4() const { return c4_; }

 private:
  Vec q_ref_;
  double c0_;
  Vec c1_;
  Mat c2_;
  Tensor3 c3_;
  Tensor4 c4_;
};

/// V(q) = a - b q^2 + c q^4.
QuarticPotential make_double_well(double a, double b, double c);
/// V(q) = v0 + (q - q_ref)^T k (q - q_ref)/2.
QuarticPotential make_harmonic(const Vec& q_ref, const Mat& k, double v0 = 0.0);
/// Reads D, c0, c1, c2, c3, c4 and q_ref as whitespace-separated numbers with
/// tensors in row-major order.
QuarticPotential read_quartic_file(const std::string& path);

/// V(q) = V_eq + sum_j d'(1 - y_j)^2 + d_e (1 - y)^2,
/// y_j = exp[-a'_j (q_j - q_eq,j)], y = exp[-a^T (q - q_eq)].
class CoupledMorse final : public Potential {
 public:
  CoupledMorse(double v_eq, Vec q_eq, double de_prime, Vec a_prime, double de, Vec a);
  static CoupledMorse from_anharmonicities(double v_eq, const Vec& q_eq, double de_prime,
                                           const Vec& chi_prime, double de, const Vec& chi);

  int dim() const override { return static_cast<int>(q_eq_.size()); }
  std::string kind() const override { return "morse"; }
  double value(const Vec& q) const override;
  Derivatives pointwise(const Vec& q, int order) const override;
  MomentBundle moments(const Vec& q, const Mat& sigma, int order) const override;

  double v_eq() const { return v_eq_; }
  const Vec& q_eq() const { return q_eq_; }
  double de_prime() const { return de_prime_; }
  const Vec& a_prime() const { return a_prime_; }
  double de() const { return de_; }
  const Vec& a() const { return a_; }

 private:
  // m_j, n_j (mode terms) and M, N (coupling) given log-arguments.
  Derivatives assemble(const Vec& m, const Vec& n, double mc, double nc, int order) const;

  double v_eq_;
  Vec q_eq_;
  double de_prime_;
  Vec a_prime_;
  double de_;
  Vec a_;
};

/// Tensor-product Gauss-Hermite quadrature of V^(k) over the Gaussian density,
/// in the eigenbasis of sigma, refined by doubling the node count until two
/// successive levels agree to `tol` relative. D <= 3.
MomentBundle quadrature_moments(const Potential& pot, const Vec& q, const Mat& sigma, int order,
                                double tol = 1e-13);

/// Gauss-Hermite nodes and weights for the weight exp(-x^2).
void gauss_hermite(int n, Vec& nodes, Vec& weights);

/// Largest absolute entry difference over all tensors present in both.
double max_abs_difference(const Derivatives& a, const Derivatives& b);
/// Largest absolute entry over all tensors present.
double max_abs_entry(const Derivatives& a);

}  // namespace gwp
