#include "gwpdyn/gaussian.hpp"

#include <cmath>

#include "gwpdyn/errors.hpp"

namespace gwp {

namespace {

constexpr cplx kI(0.0, 1.0);

Mat imag_part(const CMat& a) { return a.imag(); }

void require_same_dim(int d1, int d2) {
  if (d1 != d2) fail(ErrorCode::invalid_argument, "Gaussians of different dimension");
}

// Linear-exponent form exp{(i/hbar)[x^T W x/2 + lambda^T x + eta]}.
struct QuadraticForm {
  CMat w;
  CVec lambda;
  cplx eta;
};

QuadraticForm quadratic_form(const Vec& q, const Vec& p, const CMat& w, cplx phase) {
  QuadraticForm f;
  f.w = w;
  f.lambda = p.cast<cplx>() - w * q.cast<cplx>();
  f.eta = phase - 0.5 * q.cast<cplx>().dot(f.lambda + p.cast<cplx>());
  return f;
}

// Exponent (i/hbar)[-dl^T dW^-1 dl/2 + d_eta] of <1|2> and the factor dW/(2i).
cplx overlap_exponent(const QuadraticForm& f1, const QuadraticForm& f2, double hbar,
                      CMat& dw_over_2i) {
  const CMat dw = f2.w - f1.w.conjugate();
  const CVec dl = f2.lambda - f1.lambda.conjugate();
  const cplx deta = f2.eta - std::conj(f1.eta);
  dw_over_2i = symmetrize(CMat(dw / (2.0 * kI)));
  SymmetricLdlt f(dw_over_2i);
  if (!f.ok()) fail(ErrorCode::degenerate_pair, "singular width difference in overlap");
  // dW^-1 = (dW/2i)^-1 / (2i)
  const CVec x = f.solve(dl) / (2.0 * kI);
  const cplx quad = dl.transpose() * x;
  return (kI / hbar) * (-0.5 * quad + deta);
}

}  // namespace

MassSpec MassSpec::make(const Mat& m, double hbar) {
  if (!(hbar > 0.0)) fail(ErrorCode::invalid_argument, "hbar must be positive");
  if (m.rows() != m.cols() || m.rows() == 0)
    fail(ErrorCode::invalid_argument, "mass matrix must be square and non-empty");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    fail(ErrorCode::invalid_argument, "mass matrix must be symmetric");
  if (!is_positive_definite(m)) fail(ErrorCode::invalid_argument, "mass matrix must be positive-definite");
  MassSpec ms;
  ms.m = symmetrize(m);
  ms.m_inv = symmetrize(Mat(ms.m.inverse()));
  ms.hbar = hbar;
  return ms;
}

MassSpec MassSpec::scalar(int dim, double mass, double hbar) {
  if (dim <= 0) fail(ErrorCode::invalid_argument, "dimension must be positive");
  return make(mass * Mat::Identity(dim, dim), hbar);
}

int state_dim(const GaussianState& g) {
  return std::visit([](const auto& s) { return s.dim(); }, g);
}

const Vec& state_q(const GaussianState& g) {
  return std::visit([](const auto& s) -> const Vec& { return s.q; }, g);
}

const Vec& state_p(const GaussianState& g) {
  return std::visit([](const auto& s) -> const Vec& { return s.p; }, g);
}

HellerGaussian make_normalized_heller(const Vec& q, const Vec& p, const CMat& a, double phase,
                                      double hbar) {
  HellerGaussian g{q, p, symmetrize(a), cplx(phase, 0.0)};
  validate(g);
  const auto ld = spd_log_det(imag_part(g.a));
  const int d = g.dim();
  const double delta = 0.25 * hbar * (d * std::log(kPi * hbar) - *ld);
  g.gamma = cplx(phase, delta);
  return g;
}

cplx log_det_lu(const CMat& m) {
  Eigen::PartialPivLU<CMat> lu(m);
  const CMat& f = lu.matrixLU();
  cplx s = 0.0;
  for (int i = 0; i < f.rows(); ++i) {
    if (std::abs(f(i, i)) == 0.0) fail(ErrorCode::invalid_state, "singular matrix");
    s += std::log(f(i, i));
  }
  if (lu.permutationP().determinant() < 0) s += cplx(0.0, kPi);
  return s;
}

void validate(const HellerGaussian& g) {
  const int d = g.dim();
  if (d == 0 || g.p.size() != d || g.a.rows() != d || g.a.cols() != d)
    fail(ErrorCode::invalid_state, "inconsistent Heller Gaussian dimensions");
  const double scale = std::max(1.0, g.a.cwiseAbs().maxCoeff());
  if ((g.a - g.a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    fail(ErrorCode::invalid_state, "width matrix A is not symmetric");
  if (!is_positive_definite(imag_part(g.a)))
    fail(ErrorCode::invalid_state, "Im A is not positive-definite");
}

double hagedorn_symmetry_residual(const HagedornGaussian& g) {
  return (g.Q.transpose() * g.P - g.P.transpose() * g.Q).cwiseAbs().maxCoeff();
}

double hagedorn_symplectic_residual(const HagedornGaussian& g) {
  const int d = g.dim();
  return (g.Q.adjoint() * g.P - g.P.adjoint() * g.Q - 2.0 * kI * CMat::Identity(d, d))
      .cwiseAbs()
      .maxCoeff();
}

void validate(const HagedornGaussian& g, double tol) {
  const int d = g.dim();
  if (d == 0 || g.p.size() != d || g.Q.rows() != d || g.Q.cols() != d || g.P.rows() != d ||
      g.P.cols() != d)
    fail(ErrorCode::invalid_state, "inconsistent Hagedorn Gaussian dimensions");
  const double scale = std::max(1.0, std::max(g.Q.cwiseAbs().maxCoeff(), g.P.cwiseAbs().maxCoeff()));
  if (hagedorn_symmetry_residual(g) > tol * scale * scale)
    fail(ErrorCode::invalid_state, "Q^T P - P^T Q != 0");
  if (hagedorn_symplectic_residual(g) > tol * scale * scale)
    fail(ErrorCode::invalid_state, "Q^dag P - P^dag Q != 2i I");
  Eigen::PartialPivLU<CMat> lu(g.Q);
  if (std::abs(lu.determinant()) == 0.0) fail(ErrorCode::invalid_state, "Q is singular");
}

double log_norm_heller(const HellerGaussian& g, double hbar) {
  const auto ld = spd_log_det(imag_part(g.a));
  if (!ld) fail(ErrorCode::invalid_state, "Im A is not positive-definite");
  return 0.25 * (g.dim() * std::log(kPi * hbar) - *ld) - g.gamma.imag() / hbar;
}

double norm_heller(const HellerGaussian& g, const MassSpec& ms) {
  return std::exp(log_norm_heller(g, ms.hbar));
}

double norm_hagedorn(const HagedornGaussian& g, double) {
  Eigen::PartialPivLU<CMat> lu(g.Q);
  if (std::abs(lu.determinant()) == 0.0) fail(ErrorCode::invalid_state, "Q is singular");
  const CMat w = symmetrize(CMat(g.P * lu.inverse()));
  const auto ld = spd_log_det(w.imag());
  if (!ld) fail(ErrorCode::invalid_state, "Im(P Q^-1) is not positive-definite");
  const double log_abs_det_q = log_det_lu(g.Q).real();
  return std::exp(-0.25 * (*ld + 2.0 * log_abs_det_q));
}

double norm(const GaussianState& g, const MassSpec& ms) {
  if (const auto* h = std::get_if<HellerGaussian>(&g)) return norm_heller(*h, ms);
  return norm_hagedorn(std::get<HagedornGaussian>(g), ms.hbar);
}

Covariances covariances(const HellerGaussian& g, double hbar) {
  const Mat b = imag_part(g.a);
  const Mat ar = g.a.real();
  const Mat binv = symmetrize(Mat(b.inverse()));
  return {symmetrize(Mat(0.5 * hbar * binv)), symmetrize(Mat(0.5 * hbar * (ar * binv * ar + b)))};
}

Covariances covariances(const HagedornGaussian& g, double hbar) {
  return {symmetrize(Mat(0.5 * hbar * (g.Q * g.Q.adjoint()).real())),
          symmetrize(Mat(0.5 * hbar * (g.P * g.P.adjoint()).real()))};
}

Covariances covariances(const GaussianState& g, double hbar) {
  return std::visit([hbar](const auto& s) { return covariances(s, hbar); }, g);
}

Mat position_covariance(const GaussianState& g, double hbar) {
  if (const auto* h = std::get_if<HagedornGaussian>(&g))
    return symmetrize(Mat(0.5 * hbar * (h->Q * h->Q.adjoint()).real()));
  return covariances(std::get<HellerGaussian>(g), hbar).sigma;
}

double fourth_moment(const Mat& s, int j, int k, int l, int m) {
  const int d = static_cast<int>(s.rows());
  for (int i : {j, k, l, m})
    if (i < 0 || i >= d) fail(ErrorCode::invalid_argument, "fourth_moment index out of range");
  return s(j, k) * s(l, m) + s(j, l) * s(k, m) + s(j, m) * s(k, l);
}

HagedornGaussian heller_to_hagedorn(const HellerGaussian& g, const MassSpec& ms) {
  validate(g);
  const double n = norm_heller(g, ms);
  if (std::abs(n - 1.0) > 1e-8)
    fail(ErrorCode::not_normalized, "heller_to_hagedorn requires a normalized state");
  const Mat b = imag_part(g.a);
  const CMat q = spd_inverse_sqrt(b).cast<cplx>();
  HagedornGaussian h;
  h.q = g.q;
  h.p = g.p;
  h.Q = q;
  h.P = g.a * q;
  h.S = g.gamma.real();
  h.log_det_q = cplx(-0.5 * *spd_log_det(b), 0.0);
  return h;
}

HellerGaussian hagedorn_to_heller(const HagedornGaussian& g, const MassSpec& ms) {
  Eigen::PartialPivLU<CMat> lu(g.Q);
  if (std::abs(lu.determinant()) == 0.0) fail(ErrorCode::invalid_state, "Q is singular");
  HellerGaussian h;
  h.q = g.q;
  h.p = g.p;
  h.a = symmetrize(CMat(g.P * lu.inverse()));
  const double hb = ms.hbar;
  h.gamma = g.S + 0.5 * kI * hb * (g.log_det_q + 0.5 * g.dim() * std::log(kPi * hb));
  return h;
}

HellerGaussian as_heller(const GaussianState& g, const MassSpec& ms) {
  if (const auto* h = std::get_if<HellerGaussian>(&g)) return *h;
  return hagedorn_to_heller(std::get<HagedornGaussian>(g), ms);
}

CMat width_matrix(const GaussianState& g) {
  if (const auto* h = std::get_if<HellerGaussian>(&g)) return h->a;
  const auto& s = std::get<HagedornGaussian>(g);
  return symmetrize(CMat(s.P * s.Q.partialPivLu().inverse()));
}

cplx overlap(const HellerGaussian& g1, const HellerGaussian& g2, double hbar) {
  require_same_dim(g1.dim(), g2.dim());
  const auto f1 = quadratic_form(g1.q, g1.p, g1.a, g1.gamma);
  const auto f2 = quadratic_form(g2.q, g2.p, g2.a, g2.gamma);
  CMat z;
  const cplx expo = overlap_exponent(f1, f2, hbar, z);
  // det(dW / (2 i pi hbar)) = det(dW/2i) (pi hbar)^-D
  const cplx ld = SymmetricLdlt(z).log_det() - g1.dim() * std::log(kPi * hbar);
  return std::exp(expo - 0.5 * ld);
}

cplx overlap(const HagedornGaussian& g1, const HagedornGaussian& g2, double hbar) {
  require_same_dim(g1.dim(), g2.dim());
  const CMat w1 = symmetrize(CMat(g1.P * g1.Q.partialPivLu().inverse()));
  const CMat w2 = symmetrize(CMat(g2.P * g2.Q.partialPivLu().inverse()));
  const auto f1 = quadratic_form(g1.q, g1.p, w1, g1.S);
  const auto f2 = quadratic_form(g2.q, g2.p, w2, g2.S);
  CMat z;
  const cplx expo = overlap_exponent(f1, f2, hbar, z);
  const cplx ld = SymmetricLdlt(z).log_det();
  return std::exp(expo - 0.5 * (std::conj(g1.log_det_q) + g2.log_det_q + ld));
}

cplx overlap(const GaussianState& g1, const GaussianState& g2, const MassSpec& ms) {
  if (g1.index() != g2.index()) return overlap(as_heller(g1, ms), as_heller(g2, ms), ms.hbar);
  if (const auto* h = std::get_if<HellerGaussian>(&g1))
    return overlap(*h, std::get<HellerGaussian>(g2), ms.hbar);
  return overlap(std::get<HagedornGaussian>(g1), std::get<HagedornGaussian>(g2), ms.hbar);
}

// d^2 = (N1 - N2)^2 + 2 N1 N2 [1 - Re exp(L)] with L = log<1|2> - log N1 - log N2
// rewritten in terms of differences of the parameters so that nearby states
// do not lose precision to cancellation.
double distance(const HellerGaussian& g1, const HellerGaussian& g2, double hbar) {
  require_same_dim(g1.dim(), g2.dim());
  validate(g1);
  validate(g2);
  const Mat b1 = imag_part(g1.a);
  const CMat da = g2.a - g1.a;
  const Mat db = imag_part(da);
  const CVec dq = (g2.q - g1.q).cast<cplx>();
  const CVec dp = (g2.p - g1.p).cast<cplx>();
  const cplx dgamma = g2.gamma - g1.gamma;

  const cplx ratio_b = log_det_ratio(b1.cast<cplx>(), db.cast<cplx>());
  const cplx ratio_w = log_det_ratio(b1.cast<cplx>(), CMat(-0.5 * kI * da));

  const CMat w = da + 2.0 * kI * b1.cast<cplx>();
  const CVec b = dp - g2.a * dq;
  SymmetricLdlt fw(w);
  if (!fw.ok()) fail(ErrorCode::degenerate_pair, "singular width difference in distance");
  const cplx bwb = b.transpose() * fw.solve(b);
  const cplx qaq = dq.transpose() * g2.a * dq;
  const cplx p2dq = g2.p.cast<cplx>().dot(dq);

  const cplx l = 0.25 * ratio_b - 0.5 * ratio_w +
                 (kI / hbar) * (dgamma.real() + 0.5 * qaq - p2dq - 0.5 * bwb);

  const double ln1 = log_norm_heller(g1, hbar);
  const double ln2 = log_norm_heller(g2, hbar);
  const double n1 = std::exp(ln1);
  const double n2 = std::exp(ln2);
  const double dln = 0.25 * ratio_b.real() + dgamma.imag() / hbar;  // ln N1 - ln N2
  const double dn = n2 * std::expm1(dln);
  const double s = std::sin(0.5 * l.imag());
  const double d2 = dn * dn + 2.0 * n1 * n2 * (-std::expm1(l.real()) + 2.0 * std::exp(l.real()) * s * s);
  return std::sqrt(std::max(d2, 0.0));
}

double distance(const GaussianState& g1, const GaussianState& g2, const MassSpec& ms) {
  return distance(as_heller(g1, ms), as_heller(g2, ms), ms.hbar);
}

std::vector<cplx> evaluate_wavefunction(const HellerGaussian& g, const std::vector<Vec>& points,
                                        double hbar) {
  std::vector<cplx> out;
  out.reserve(points.size());
  for (const auto& x : points) {
    if (x.size() != g.dim()) fail(ErrorCode::invalid_argument, "point dimension mismatch");
    const CVec dx = (x - g.q).cast<cplx>();
    const cplx quad = dx.transpose() * g.a * dx;
    const cplx e = 0.5 * quad + g.p.cast<cplx>().dot(dx) + g.gamma;
    out.push_back(std::exp(kI * e / hbar));
  }
  return out;
}

std::vector<cplx> evaluate_wavefunction(const HagedornGaussian& g,
                                        const std::vector<Vec>& points, double hbar) {
  const CMat w = symmetrize(CMat(g.P * g.Q.partialPivLu().inverse()));
  const cplx pre = -0.25 * g.dim() * std::log(kPi * hbar) - 0.5 * g.log_det_q;
  std::vector<cplx> out;
  out.reserve(points.size());
  for (const auto& x : points) {
    if (x.size() != g.dim()) fail(ErrorCode::invalid_argument, "point dimension mismatch");
    const CVec dx = (x - g.q).cast<cplx>();
    const cplx quad = dx.transpose() * w * dx;
    const cplx e = 0.5 * quad + g.p.cast<cplx>().dot(dx) + g.S;
    out.push_back(std::exp(pre + kI * e / hbar));
  }
  return out;
}

std::vector<cplx> evaluate_wavefunction(const GaussianState& g, const std::vector<Vec>& points,
                                        const MassSpec& ms) {
  return std::visit([&](const auto& s) { return evaluate_wavefunction(s, points, ms.hbar); }, g);
}

}  // namespace gwp
