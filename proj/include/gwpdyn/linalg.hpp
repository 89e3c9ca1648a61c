#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace gwp {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Unpivoted LDL^T factorization of a complex symmetric matrix.
///
/// Complex symmetric matrices whose real or imaginary part is definite (the
/// only kind the Gaussian algebra produces) factor stably without pivoting,
/// and every pivot stays off the negative real axis. Summing principal logs
/// of the pivots then gives the branch of log det that is continuous along
/// the path from a real positive-definite matrix.
class SymmetricLdlt {
 public:
  explicit SymmetricLdlt(const CMat& a);

  /// False if a pivot vanished.
  bool ok() const { return ok_; }
  /// True if a pivot lies on the closed negative real axis.
  bool on_branch_cut() const { return branch_cut_; }

  const CVec& pivots() const { return d_; }
  cplx log_det() const;
  CMat solve(const CMat& rhs) const;
  CVec solve(const CVec& rhs) const;

 private:
  CMat l_;
  CVec d_;
  bool ok_ = true;
  bool branch_cut_ = false;
};

/// log det(base + delta) - log det(base) for complex symmetric matrices whose
/// real parts are positive definite along the segment base -> base + delta.
/// Small perturbations go through the trace series of log(I + base^-1 delta),
/// which keeps relative accuracy where a direct difference of log dets would
/// cancel catastrophically.
cplx log_det_ratio(const CMat& base, const CMat& delta);

Mat symmetrize(const Mat& a);
CMat symmetrize(const CMat& a);

bool is_positive_definite(const Mat& a);
/// Unique SPD square root and inverse square root via the symmetric
/// eigendecomposition.
Mat spd_sqrt(const Mat& a);
Mat spd_inverse_sqrt(const Mat& a);
/// log det of an SPD matrix via Cholesky; nullopt if not positive definite.
std::optional<double> spd_log_det(const Mat& a);

/// Column-major vectorization index of element (row, col) of a D x D matrix.
inline int vec_index(int row, int col, int dim) { return row + dim * col; }

/// Dense totally-symmetric-by-convention tensors. Storage is row-major over
/// the index tuple; symmetry is a property checked by callers, not enforced.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int dim) : dim_(dim), data_(static_cast<size_t>(dim) * dim * dim, 0.0) {}
  int dim() const { return dim_; }
  bool empty() const { return data_.empty(); }
  double& operator()(int i, int j, int k) { return data_[(static_cast<size_t>(i) * dim_ + j) * dim_ + k]; }
  double operator()(int i, int j, int k) const { return data_[(static_cast<size_t>(i) * dim_ + j) * dim_ + k]; }
  const std::vector<double>& data() const { return data_; }
  double max_symmetry_defect() const;

 private:
  int dim_ = 0;
  std::vector<double> data_;
};

class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int dim)
      : dim_(dim), data_(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}
  int dim() const { return dim_; }
  bool empty() const { return data_.empty(); }
  double& operator()(int i, int j, int k, int l) {
    return data_[((static_cast<size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return data_[((static_cast<size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l];
  }
  const std::vector<double>& data() const { return data_; }
  double max_symmetry_defect() const;

 private:
  int dim_ = 0;
  std::vector<double> data_;
};

double max_abs_difference(const Tensor3& a, const Tensor3& b);
double max_abs_difference(const Tensor4& a, const Tensor4& b);

}  // namespace gwp
