#include "gwpdyn/potentials.hpp"

#include <cmath>
#include <fstream>
#include <vector>

#include "gwpdyn/errors.hpp"

namespace gwp {

namespace {

constexpr double kExpGuard = 700.0;

void init_derivatives(Derivatives& d, int dim, int order) {
  d.order = order;
  d.v0 = 0.0;
  d.v1 = order >= 1 ? Vec::Zero(dim) : Vec();
  d.v2 = order >= 2 ? Mat::Zero(dim, dim) : Mat();
  d.v3 = order >= 3 ? Tensor3(dim) : Tensor3();
  d.v4 = order >= 4 ? Tensor4(dim) : Tensor4();
}

void check_order(int order) {
  if (order < 0 || order > 4) fail(ErrorCode::invalid_argument, "derivative order must be 0..4");
}

void check_point(const Vec& q, int dim) {
  if (q.size() != dim) fail(ErrorCode::invalid_argument, "point dimension does not match potential");
}

void check_sigma(const Mat& sigma, int dim) {
  if (sigma.rows() != dim || sigma.cols() != dim)
    fail(ErrorCode::invalid_argument, "covariance dimension does not match potential");
}

double guarded_exp(double x) {
  if (x > kExpGuard) fail(ErrorCode::range, "exponent overflow in Morse potential");
  return std::exp(x);
}

void accumulate(Derivatives& acc, const Derivatives& d, double w) {
  acc.v0 += w * d.v0;
  if (acc.order >= 1) acc.v1 += w * d.v1;
  if (acc.order >= 2) acc.v2 += w * d.v2;
  if (acc.order >= 3)
    for (int i = 0; i < acc.v3.dim(); ++i)
      for (int j = 0; j < acc.v3.dim(); ++j)
        for (int k = 0; k < acc.v3.dim(); ++k) acc.v3(i, j, k) += w * d.v3(i, j, k);
  if (acc.order >= 4) {
    const int n = acc.v4.dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) acc.v4(i, j, k, l) += w * d.v4(i, j, k, l);
  }
}

}  // namespace

QuarticPotential::QuarticPotential(Vec q_ref, double c0, Vec c1, Mat c2, Tensor3 c3, Tensor4 c4)
    : q_ref_(std::move(q_ref)), c0_(c0), c1_(std::move(c1)), c2_(std::move(c2)),
      c3_(std::move(c3)), c4_(std::move(c4)) {
  const int d = static_cast<int>(q_ref_.size());
  if (d == 0) fail(ErrorCode::invalid_argument, "quartic potential needs dimension >= 1");
  if (c1_.size() != d || c2_.rows() != d || c2_.cols() != d || c3_.dim() != d || c4_.dim() != d)
    fail(ErrorCode::invalid_argument, "quartic coefficient dimensions are inconsistent");
  const double scale2 = std::max(1.0, c2_.cwiseAbs().maxCoeff());
  if ((c2_ - c2_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale2)
    fail(ErrorCode::invalid_argument, "quartic c2 is not symmetric");
  if (c3_.max_symmetry_defect() > 1e-10)
    fail(ErrorCode::invalid_argument, "quartic c3 is not totally symmetric");
  if (c4_.max_symmetry_defect() > 1e-10)
    fail(ErrorCode::invalid_argument, "quartic c4 is not totally symmetric");
}

double QuarticPotential::value(const Vec& q) const { return pointwise(q, 0).v0; }

Derivatives QuarticPotential::pointwise(const Vec& q, int order) const {
  check_order(order);
  const int n = dim();
  check_point(q, n);
  const Vec x = q - q_ref_;

  Tensor3 t3(n);
  Mat t2 = Mat::Zero(n, n);
  Mat s2 = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc2 = 0.0;
      for (int k = 0; k < n; ++k) {
        double acc3 = 0.0;
        for (int l = 0; l < n; ++l) acc3 += c4_(i, j, k, l) * x(l);
        t3(i, j, k) = acc3;
        acc2 += acc3 * x(k);
        s2(i, j) += c3_(i, j, k) * x(k);
      }
      t2(i, j) = acc2;
    }
  const Vec t1 = t2 * x;
  const Vec s1 = s2 * x;
  const Vec r1 = c2_ * x;

  Derivatives d;
  init_derivatives(d, n, order);
  d.v0 = c0_ + c1_.dot(x) + 0.5 * r1.dot(x) + s1.dot(x) / 6.0 + t1.dot(x) / 24.0;
  if (order >= 1) d.v1 = c1_ + r1 + 0.5 * s1 + t1 / 6.0;
  if (order >= 2) d.v2 = symmetrize(Mat(c2_ + s2 + 0.5 * t2));
  if (order >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) d.v3(i, j, k) = c3_(i, j, k) + t3(i, j, k);
  if (order >= 4) d.v4 = c4_;
  return d;
}

QuarticPotential QuarticPotential::recentered(const Vec& q_new) const {
  const Derivatives d = pointwise(q_new, 4);
  return QuarticPotential(q_new, d.v0, d.v1, d.v2, d.v3, d.v4);
}

MomentBundle QuarticPotential::moments(const Vec& q, const Mat& sigma, int order) const {
  check_order(order);
  const int n = dim();
  check_point(q, n);
  check_sigma(sigma, n);
  const Derivatives d = pointwise(q, 4);

  // c4 contracted with sigma over the last two indices
  Mat c4s = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += c4_(i, j, k, l) * sigma(k, l);
      c4s(i, j) = acc;
    }

  MomentBundle m;
  init_derivatives(m, n, order);
  m.v0 = d.v0 + 0.5 * (d.v2.cwiseProduct(sigma)).sum() + 0.125 * (c4s.cwiseProduct(sigma)).sum();
  if (order >= 1) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) acc += d.v3(i, j, k) * sigma(j, k);
      m.v1(i) = d.v1(i) + 0.5 * acc;
    }
  }
  if (order >= 2) m.v2 = symmetrize(Mat(d.v2 + 0.5 * c4s));
  if (order >= 3) m.v3 = d.v3;
  if (order >= 4) m.v4 = c4_;
  return m;
}

QuarticPotential make_double_well(double a, double b, double c) {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
    fail(ErrorCode::invalid_argument, "double-well parameters a, b, c must be positive");
  Tensor3 c3(1);
  Tensor4 c4(1);
  c4(0, 0, 0, 0) = 24.0 * c;
  return QuarticPotential(Vec::Zero(1), a, Vec::Zero(1), Mat::Constant(1, 1, -2.0 * b), c3, c4);
}

QuarticPotential make_harmonic(const Vec& q_ref, const Mat& k, double v0) {
  const int n = static_cast<int>(q_ref.size());
  return QuarticPotential(q_ref, v0, Vec::Zero(n), k, Tensor3(n), Tensor4(n));
}

QuarticPotential read_quartic_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open quartic tensor file " + path);
  auto next = [&]() {
    double v;
    if (!(in >> v)) fail(ErrorCode::io, "truncated quartic tensor file " + path);
    return v;
  };
  const double dd = next();
  const int n = static_cast<int>(dd);
  if (n < 1 || dd != n) fail(ErrorCode::io, "quartic tensor file must start with the dimension");
  const double c0 = next();
  Vec c1(n);
  for (int i = 0; i < n; ++i) c1(i) = next();
  Mat c2(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c2(i, j) = next();
  Tensor3 c3(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) c3(i, j, k) = next();
  Tensor4 c4(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) c4(i, j, k, l) = next();
  Vec q_ref(n);
  for (int i = 0; i < n; ++i) q_ref(i) = next();
  return QuarticPotential(q_ref, c0, c1, c2, c3, c4);
}

CoupledMorse::CoupledMorse(double v_eq, Vec q_eq, double de_prime, Vec a_prime, double de, Vec a)
    : v_eq_(v_eq), q_eq_(std::move(q_eq)), de_prime_(de_prime), a_prime_(std::move(a_prime)),
      de_(de), a_(std::move(a)) {
  const int n = static_cast<int>(q_eq_.size());
  if (n == 0) fail(ErrorCode::invalid_argument, "Morse potential needs dimension >= 1");
  if (a_prime_.size() != n || a_.size() != n)
    fail(ErrorCode::invalid_argument, "Morse parameter vectors must have length D");
  if (!(de_prime_ > 0.0)) fail(ErrorCode::invalid_argument, "Morse d'_e must be positive");
  if ((a_prime_.array() <= 0.0).any()) fail(ErrorCode::invalid_argument, "Morse a'_j must be positive");
  if (!(de_ >= 0.0)) fail(ErrorCode::invalid_argument, "Morse coupling d_e must be nonnegative");
}

CoupledMorse CoupledMorse::from_anharmonicities(double v_eq, const Vec& q_eq, double de_prime,
                                                const Vec& chi_prime, double de, const Vec& chi) {
  return CoupledMorse(v_eq, q_eq, de_prime, chi_prime * std::sqrt(8.0 * de_prime), de,
                      chi * std::sqrt(8.0 * de));
}

Derivatives CoupledMorse::assemble(const Vec& m, const Vec& nn, double mc, double nc,
                                   int order) const {
  const int n = dim();
  Derivatives d;
  init_derivatives(d, n, order);
  d.v0 = v_eq_ + de_prime_ * (1.0 - 2.0 * m.array() + nn.array()).sum() + de_ * (1.0 - 2.0 * mc + nc);
  double sign = 1.0;
  double pow2 = 1.0;
  for (int k = 1; k <= order; ++k) {
    const Vec mode = sign * 2.0 * de_prime_ *
                     (a_prime_.array().pow(k) * (m.array() - pow2 * nn.array())).matrix();
    const double cpl = sign * 2.0 * de_ * (mc - pow2 * nc);
    switch (k) {
      case 1:
        d.v1 = mode + cpl * a_;
        break;
      case 2:
        d.v2 = cpl * a_ * a_.transpose();
        d.v2.diagonal() += mode;
        break;
      case 3:
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) d.v3(i, j, l) = cpl * a_(i) * a_(j) * a_(l);
        for (int i = 0; i < n; ++i) d.v3(i, i, i) += mode(i);
        break;
      case 4:
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
              for (int r = 0; r < n; ++r) d.v4(i, j, l, r) = cpl * a_(i) * a_(j) * a_(l) * a_(r);
        for (int i = 0; i < n; ++i) d.v4(i, i, i, i) += mode(i);
        break;
    }
    sign = -sign;
    pow2 *= 2.0;
  }
  return d;
}

double CoupledMorse::value(const Vec& q) const { return pointwise(q, 0).v0; }

Derivatives CoupledMorse::pointwise(const Vec& q, int order) const {
  check_order(order);
  const int n = dim();
  check_point(q, n);
  const Vec x = q - q_eq_;
  Vec m(n), nn(n);
  for (int j = 0; j < n; ++j) {
    const double ly = -a_prime_(j) * x(j);
    m(j) = guarded_exp(ly);
    nn(j) = guarded_exp(2.0 * ly);
  }
  const double lyc = -a_.dot(x);
  return assemble(m, nn, guarded_exp(lyc), guarded_exp(2.0 * lyc), order);
}

MomentBundle CoupledMorse::moments(const Vec& q, const Mat& sigma, int order) const {
  check_order(order);
  const int n = dim();
  check_point(q, n);
  check_sigma(sigma, n);
  const Vec x = q - q_eq_;
  Vec m(n), nn(n);
  for (int j = 0; j < n; ++j) {
    const double ly = -a_prime_(j) * x(j);
    const double lz = 0.5 * sigma(j, j) * a_prime_(j) * a_prime_(j);
    m(j) = guarded_exp(ly + lz);
    nn(j) = guarded_exp(2.0 * ly + 4.0 * lz);
  }
  const double lyc = -a_.dot(x);
  const double lzc = 0.5 * a_.dot(sigma * a_);
  return assemble(m, nn, guarded_exp(lyc + lzc), guarded_exp(2.0 * lyc + 4.0 * lzc), order);
}

void gauss_hermite(int n, Vec& nodes, Vec& weights) {
  if (n < 1) fail(ErrorCode::invalid_argument, "Gauss-Hermite needs at least one node");
  Mat j = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) j(k - 1, k) = j(k, k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Mat> es(j);
  nodes = es.eigenvalues();
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const double v = es.eigenvectors()(0, k);
    weights(k) = std::sqrt(kPi) * v * v;
  }
}

MomentBundle quadrature_moments(const Potential& pot, const Vec& q, const Mat& sigma, int order,
                                double tol) {
  check_order(order);
  const int d = pot.dim();
  if (d > 3) fail(ErrorCode::unsupported, "quadrature oracle supports D <= 3");
  check_point(q, d);
  check_sigma(sigma, d);
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(sigma));
  if (es.eigenvalues().minCoeff() < 0.0)
    fail(ErrorCode::invalid_argument, "covariance is not positive semi-definite");
  const Mat root = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal();

  const int max_nodes = d == 1 ? 256 : (d == 2 ? 128 : 48);
  MomentBundle prev;
  bool have_prev = false;
  for (int nodes_n = 8; nodes_n <= max_nodes; nodes_n *= 2) {
    Vec t, w;
    gauss_hermite(nodes_n, t, w);
    const Vec xi = std::sqrt(2.0) * t;
    const Vec wn = w / std::sqrt(kPi);
    MomentBundle acc;
    init_derivatives(acc, d, order);
    std::vector<int> idx(d, 0);
    const long total = static_cast<long>(std::pow(nodes_n, d));
    for (long flat = 0; flat < total; ++flat) {
      long rem = flat;
      Vec z(d);
      double weight = 1.0;
      for (int a = 0; a < d; ++a) {
        const int k = static_cast<int>(rem % nodes_n);
        rem /= nodes_n;
        z(a) = xi(k);
        weight *= wn(k);
      }
      if (weight < 1e-300) continue;
      accumulate(acc, pot.pointwise(q + root * z, order), weight);
    }
    if (have_prev &&
        max_abs_difference(acc, prev) <= tol * std::max(1.0, max_abs_entry(acc)))
      return acc;
    prev = std::move(acc);
    have_prev = true;
  }
  return prev;
}

double max_abs_difference(const Derivatives& a, const Derivatives& b) {
  double worst = std::abs(a.v0 - b.v0);
  const int order = std::min(a.order, b.order);
  if (order >= 1) worst = std::max(worst, (a.v1 - b.v1).cwiseAbs().maxCoeff());
  if (order >= 2) worst = std::max(worst, (a.v2 - b.v2).cwiseAbs().maxCoeff());
  if (order >= 3) worst = std::max(worst, max_abs_difference(a.v3, b.v3));
  if (order >= 4) worst = std::max(worst, max_abs_difference(a.v4, b.v4));
  return worst;
}

double max_abs_entry(const Derivatives& a) {
  double worst = std::abs(a.v0);
  if (a.order >= 1) worst = std::max(worst, a.v1.cwiseAbs().maxCoeff());
  if (a.order >= 2) worst = std::max(worst, a.v2.cwiseAbs().maxCoeff());
  for (double v : a.v3.data()) worst = std::max(worst, std::abs(v));
  for (double v : a.v4.data()) worst = std::max(worst, std::abs(v));
  return worst;
}

}  // namespace gwp
