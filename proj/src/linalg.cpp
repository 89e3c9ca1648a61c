#include "gwpdyn/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "gwpdyn/errors.hpp"

namespace gwp {

SymmetricLdlt::SymmetricLdlt(const CMat& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) fail(ErrorCode::invalid_argument, "LDLT of a non-square matrix");
  l_ = CMat::Identity(n, n);
  d_ = CVec::Zero(n);
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  for (int j = 0; j < n; ++j) {
    cplx dj = a(j, j);
    for (int k = 0; k < j; ++k) dj -= l_(j, k) * l_(j, k) * d_(k);
    d_(j) = dj;
    if (std::abs(dj) <= 1e-18 * scale) {
      ok_ = false;
      return;
    }
    if (dj.real() <= 0.0 && std::abs(dj.imag()) <= 1e-14 * std::abs(dj)) branch_cut_ = true;
    for (int i = j + 1; i < n; ++i) {
      cplx s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k) * d_(k);
      l_(i, j) = s / dj;
    }
  }
}

cplx SymmetricLdlt::log_det() const {
  cplx sum = 0.0;
  for (int j = 0; j < d_.size(); ++j) sum += std::log(d_(j));
  return sum;
}

CVec SymmetricLdlt::solve(const CVec& rhs) const {
  const int n = static_cast<int>(d_.size());
  CVec y = rhs;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < i; ++k) y(i) -= l_(i, k) * y(k);
  for (int i = 0; i < n; ++i) y(i) /= d_(i);
  for (int i = n - 1; i >= 0; --i)
    for (int k = i + 1; k < n; ++k) y(i) -= l_(k, i) * y(k);
  return y;
}

CMat SymmetricLdlt::solve(const CMat& rhs) const {
  CMat out(rhs.rows(), rhs.cols());
  for (int c = 0; c < rhs.cols(); ++c) out.col(c) = solve(CVec(rhs.col(c)));
  return out;
}

cplx log_det_ratio(const CMat& base, const CMat& delta) {
  SymmetricLdlt fb(base);
  if (!fb.ok()) fail(ErrorCode::degenerate_pair, "singular base matrix in log-det ratio");
  const CMat x = fb.solve(delta);
  const double nx = x.norm();
  if (nx <= 0.25) {
    // trace series of log(I + X)
    cplx sum = 0.0;
    CMat pw = x;
    for (int k = 1; k <= 200; ++k) {
      const cplx term = pw.trace() / static_cast<double>(k);
      sum += (k % 2 == 1) ? term : -term;
      if (std::abs(term) <= 1e-18 * std::max(std::abs(sum), 1e-300)) break;
      pw = pw * x;
    }
    return sum;
  }
  SymmetricLdlt fs(base + delta);
  if (!fs.ok()) fail(ErrorCode::degenerate_pair, "singular matrix in log-det ratio");
  return fs.log_det() - fb.log_det();
}

Mat symmetrize(const Mat& a) { return 0.5 * (a + a.transpose()); }
CMat symmetrize(const CMat& a) { return 0.5 * (a + a.transpose()); }

bool is_positive_definite(const Mat& a) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  Eigen::LLT<Mat> llt(symmetrize(a));
  return llt.info() == Eigen::Success;
}

namespace {
Mat spd_power(const Mat& a, double power) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(a));
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    fail(ErrorCode::invalid_state, "matrix is not symmetric positive-definite");
  const Vec ev = es.eigenvalues().array().pow(power).matrix();
  return symmetrize(Mat(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose()));
}
}  // namespace

Mat spd_sqrt(const Mat& a) { return spd_power(a, 0.5); }
Mat spd_inverse_sqrt(const Mat& a) { return spd_power(a, -0.5); }

std::optional<double> spd_log_det(const Mat& a) {
  Eigen::LLT<Mat> llt(symmetrize(a));
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Mat& l = llt.matrixLLT();
  double s = 0.0;
  for (int i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0)) return std::nullopt;
    s += 2.0 * std::log(l(i, i));
  }
  return s;
}

double Tensor3::max_symmetry_defect() const {
  double worst = 0.0;
  const int n = dim_;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double v = (*this)(i, j, k);
        worst = std::max({worst, std::abs(v - (*this)(j, i, k)), std::abs(v - (*this)(i, k, j)),
                          std::abs(v - (*this)(k, j, i))});
      }
  return worst;
}

double Tensor4::max_symmetry_defect() const {
  double worst = 0.0;
  const int n = dim_;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = (*this)(i, j, k, l);
          worst = std::max({worst, std::abs(v - (*this)(j, i, k, l)),
                            std::abs(v - (*this)(i, k, j, l)), std::abs(v - (*this)(i, j, l, k)),
                            std::abs(v - (*this)(l, j, k, i))});
        }
  return worst;
}

double max_abs_difference(const Tensor3& a, const Tensor3& b) {
  if (a.dim() != b.dim()) return INFINITY;
  double worst = 0.0;
  for (size_t i = 0; i < a.data().size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

double max_abs_difference(const Tensor4& a, const Tensor4& b) {
  if (a.dim() != b.dim()) return INFINITY;
  double worst = 0.0;
  for (size_t i = 0; i < a.data().size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

}  // namespace gwp
