#include "gwpdyn/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "gwpdyn/energy.hpp"
#include "gwpdyn/errors.hpp"

namespace gwp {

namespace {

struct Offsets {
  int d, q, p, q1, p1, q2, p2;
  explicit Offsets(int dim)
      : d(dim), q(0), p(dim), q1(2 * dim), p1(2 * dim + dim * dim), q2(2 * dim + 2 * dim * dim),
        p2(2 * dim + 3 * dim * dim) {}
  int big_q(int r) const { return r == 0 ? q1 : q2; }
  int big_p(int r) const { return r == 0 ? p1 : p2; }
};

HagedornGaussian as_hagedorn(const GaussianState& g, const MassSpec& ms) {
  return std::get<HagedornGaussian>(to_parametrization(g, Parametrization::hagedorn, ms));
}

IntegratorSpec hagedorn_spec(IntegratorSpec spec) {
  spec.parametrization = Parametrization::hagedorn;
  return spec;
}

}  // namespace

int flat_size(int dim) { return 2 * dim + 4 * dim * dim; }

Vec flatten(const HagedornGaussian& g) {
  const int d = g.dim();
  const Offsets o(d);
  Vec z(flat_size(d));
  z.segment(o.q, d) = g.q;
  z.segment(o.p, d) = g.p;
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i) {
      const int k = vec_index(i, l, d);
      z(o.q1 + k) = g.Q(i, l).real();
      z(o.p1 + k) = g.P(i, l).real();
      z(o.q2 + k) = g.Q(i, l).imag();
      z(o.p2 + k) = g.P(i, l).imag();
    }
  return z;
}

HagedornGaussian unflatten(const Vec& z, const HagedornGaussian& like) {
  const int d = like.dim();
  const Offsets o(d);
  if (z.size() != flat_size(d)) fail(ErrorCode::invalid_argument, "flat vector has wrong length");
  HagedornGaussian g = like;
  g.q = z.segment(o.q, d);
  g.p = z.segment(o.p, d);
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i) {
      const int k = vec_index(i, l, d);
      g.Q(i, l) = cplx(z(o.q1 + k), z(o.q2 + k));
      g.P(i, l) = cplx(z(o.p1 + k), z(o.p2 + k));
    }
  return g;
}

Mat symplectic_form(int dim, double hbar) {
  const int n = flat_size(dim);
  const int d2 = dim * dim;
  const Offsets o(dim);
  Mat b = Mat::Zero(n, n);
  b.block(o.q, o.p, dim, dim) = Mat::Identity(dim, dim);
  b.block(o.p, o.q, dim, dim) = -Mat::Identity(dim, dim);
  for (int r = 0; r < 2; ++r) {
    b.block(o.big_q(r), o.big_p(r), d2, d2) = 0.5 * hbar * Mat::Identity(d2, d2);
    b.block(o.big_p(r), o.big_q(r), d2, d2) = -0.5 * hbar * Mat::Identity(d2, d2);
  }
  return b;
}

Mat kinetic_jacobian(double t, const MassSpec& ms, int dim) {
  const Offsets o(dim);
  Mat j = Mat::Identity(flat_size(dim), flat_size(dim));
  j.block(o.q, o.p, dim, dim) = t * ms.m_inv;
  for (int r = 0; r < 2; ++r)
    for (int l = 0; l < dim; ++l)
      j.block(o.big_q(r) + dim * l, o.big_p(r) + dim * l, dim, dim) = t * ms.m_inv;
  return j;
}

CoefficientJet coefficient_jet(const Dynamics& dyn, const Vec& q, const Mat& sigma) {
  const int d = dyn.dim();
  CoefficientJet jet;
  jet.dv1_dsigma = Tensor3(d);
  jet.dv2_dq = Tensor3(d);
  jet.dv2_dsigma = Tensor4(d);
  switch (dyn.method()) {
    case MethodKind::vga: {
      const MomentBundle m = dyn.potential().moments(q, sigma, 4);
      jet.v2 = m.v2;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k) {
            jet.dv1_dsigma(i, j, k) = 0.5 * m.v3(i, j, k);
            jet.dv2_dq(i, j, k) = m.v3(i, j, k);
            for (int l = 0; l < d; ++l) jet.dv2_dsigma(i, j, k, l) = 0.5 * m.v4(i, j, k, l);
          }
      break;
    }
    case MethodKind::tga: {
      const Derivatives p = dyn.potential().pointwise(q, 3);
      jet.v2 = p.v2;
      jet.dv2_dq = p.v3;
      break;
    }
    case MethodKind::ha:
      jet.v2 = dyn.ha_jet().v2;
      break;
  }
  return jet;
}

Mat potential_generator(const HagedornGaussian& g, const Dynamics& dyn) {
  const int d = g.dim();
  const double hbar = dyn.mass().hbar;
  const Offsets o(d);
  const Mat sigma = symmetrize(Mat(0.5 * hbar * (g.Q * g.Q.adjoint()).real()));
  const CoefficientJet jet = coefficient_jet(dyn, g.q, sigma);
  const Mat qr[2] = {g.Q.real(), g.Q.imag()};

  Mat k = Mat::Zero(flat_size(d), flat_size(d));
  k.block(o.p, o.q, d, d) = jet.v2;
  for (int s = 0; s < 2; ++s)
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i)
        for (int l = 0; l < d; ++l) {
          double acc = 0.0;
          for (int b = 0; b < d; ++b) acc += jet.dv1_dsigma(j, i, b) * qr[s](b, l);
          k(o.p + j, o.big_q(s) + vec_index(i, l, d)) = hbar * acc;
        }
  for (int r = 0; r < 2; ++r)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const int row = o.big_p(r) + vec_index(a, b, d);
        for (int kk = 0; kk < d; ++kk) {
          double acc = 0.0;
          for (int n = 0; n < d; ++n) acc += jet.dv2_dq(a, n, kk) * qr[r](n, b);
          k(row, o.q + kk) = acc;
        }
        for (int s = 0; s < 2; ++s)
          for (int i = 0; i < d; ++i)
            for (int l = 0; l < d; ++l) {
              double acc = (r == s && b == l) ? jet.v2(a, i) : 0.0;
              for (int n = 0; n < d; ++n) {
                double inner = 0.0;
                for (int c = 0; c < d; ++c) inner += jet.dv2_dsigma(a, n, i, c) * qr[s](c, l);
                acc += hbar * inner * qr[r](n, b);
              }
              k(row, o.big_q(s) + vec_index(i, l, d)) = acc;
            }
      }
  return k;
}

Mat potential_jacobian(const HagedornGaussian& g, double t, const Dynamics& dyn) {
  const int n = flat_size(g.dim());
  return Mat::Identity(n, n) - t * potential_generator(g, dyn);
}

double potential_symplectic_condition(const Mat& generator, const Mat& b) {
  const Mat bk = b * generator;
  return (bk - bk.transpose()).cwiseAbs().maxCoeff();
}

Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& map, const Vec& z,
                               double rel_h) {
  const int n = static_cast<int>(z.size());
  Mat j;
  for (int c = 0; c < n; ++c) {
    const double h = rel_h * std::max(1.0, std::abs(z(c)));
    Vec zp = z, zm = z;
    zp(c) += h;
    zm(c) -= h;
    const Vec fp = map(zp);
    const Vec fm = map(zm);
    if (c == 0) j.resize(fp.size(), n);
    j.col(c) = (fp - fm) / (2.0 * h);
  }
  return j;
}

Mat step_jacobian_fd(const HagedornGaussian& g, double dt, const IntegratorSpec& spec,
                     const Dynamics& dyn) {
  const IntegratorSpec hs = hagedorn_spec(spec);
  auto map = [&](const Vec& z) {
    const GaussianState s = step(GaussianState(unflatten(z, g)), dt, hs, dyn);
    return flatten(std::get<HagedornGaussian>(s));
  };
  return finite_difference_jacobian(map, flatten(g));
}

Mat step_jacobian_analytic(const HagedornGaussian& g, double dt, const IntegratorSpec& spec,
                           const Dynamics& dyn, HagedornGaussian* next) {
  if (spec.base == Base::rk4) fail(ErrorCode::unsupported, "RK4 has no analytic Jacobian");
  const int d = g.dim();
  const int n = flat_size(d);
  Mat jac = Mat::Identity(n, n);
  GaussianState s = g;
  for (const auto& sub : substep_program(hagedorn_spec(spec))) {
    const double t = sub.fraction * dt;
    const auto& hg = std::get<HagedornGaussian>(s);
    if (sub.kind == FlowKind::kinetic)
      jac = kinetic_jacobian(t, dyn.mass(), d) * jac;
    else
      jac = potential_jacobian(hg, t, dyn) * jac;
    s = apply_substep(s, sub, dt, dyn);
  }
  if (next) *next = std::get<HagedornGaussian>(s);
  return jac;
}

double symplecticity_defect(const Mat& jac, const Mat& b) {
  return (jac.transpose() * b * jac - b).norm();
}

SymplecticitySeries symplecticity_series(const GaussianState& g0, const IntegratorSpec& spec,
                                         const Dynamics& dyn, double dt, long n_steps,
                                         long stride, JacobianMode mode) {
  if (stride < 1) fail(ErrorCode::invalid_argument, "stride must be positive");
  const IntegratorSpec hs = hagedorn_spec(spec);
  HagedornGaussian g = as_hagedorn(g0, dyn.mass());
  const int n = flat_size(g.dim());
  const Mat b = symplectic_form(g.dim(), dyn.mass().hbar);
  const bool rk4 = spec.base == Base::rk4;
  const bool use_analytic = !rk4 && mode != JacobianMode::finite_difference;
  const bool use_fd = rk4 || mode != JacobianMode::analytic;
  Mat chain_a = Mat::Identity(n, n);
  Mat chain_fd = Mat::Identity(n, n);

  SymplecticitySeries out;
  auto record = [&](long k) {
    out.times.push_back(static_cast<double>(k) * dt);
    out.defects.push_back(symplecticity_defect(use_analytic ? chain_a : chain_fd, b));
    if (use_analytic && use_fd)
      out.chain_differences.push_back((chain_a - chain_fd).norm() / chain_a.norm());
  };
  record(0);
  for (long k = 1; k <= n_steps; ++k) {
    if (use_fd) chain_fd = step_jacobian_fd(g, dt, hs, dyn) * chain_fd;
    if (use_analytic) {
      HagedornGaussian next;
      chain_a = step_jacobian_analytic(g, dt, hs, dyn, &next) * chain_a;
      g = next;
    } else {
      g = std::get<HagedornGaussian>(step(GaussianState(g), dt, hs, dyn));
    }
    if (rk4) {
      out.counters.potential_evaluations += 4;
    } else {
      for (const auto& sub : substep_program(hs))
        if (sub.kind == FlowKind::potential) ++out.counters.potential_evaluations;
    }
    ++out.counters.substeps;
    if (k % stride == 0) record(k);
  }
  return out;
}

double reversibility_defect(const GaussianState& g0, const IntegratorSpec& spec,
                            const Dynamics& dyn, double dt, long n) {
  const GaussianState start = to_parametrization(g0, spec.parametrization, dyn.mass());
  const GaussianState fwd = propagate_final(start, spec, dyn, dt, n);
  const GaussianState back = propagate_final(fwd, spec, dyn, -dt, n);
  return distance(back, start, dyn.mass());
}

double convergence_error(const GaussianState& g0, const IntegratorSpec& spec, const Dynamics& dyn,
                         double dt, double t_final, Counters* counters) {
  const double steps = t_final / dt;
  const long n = std::lround(steps);
  if (n < 1 || std::abs(steps - static_cast<double>(n)) > 1e-9 * std::max(1.0, steps))
    fail(ErrorCode::invalid_argument, "t_final must be an integer multiple of dt");
  const GaussianState coarse = propagate_final(g0, spec, dyn, dt, n, counters);
  const GaussianState fine = propagate_final(g0, spec, dyn, 0.5 * dt, 2 * n);
  return distance(coarse, fine, dyn.mass());
}

double roundoff_plateau(double scale) {
  return 100.0 * std::numeric_limits<double>::epsilon() * scale;
}

OrderFit order_fit(const std::vector<std::pair<double, double>>& points, double plateau,
                   double ceiling) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& [dt, err] : points) {
    if (!(dt > 0.0) || !(err > plateau) || !(err <= ceiling) || !std::isfinite(err)) continue;
    const double x = std::log(dt), y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) fail(ErrorCode::invalid_argument, "order fit needs at least 3 points inside the fit window");
  OrderFit fit;
  fit.points_used = n;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

std::vector<ConservationRow> conservation_series(const PropagationRecord& rec,
                                                 const Dynamics& dyn) {
  std::vector<ConservationRow> rows;
  rows.reserve(rec.states.size());
  double e0 = 0.0;
  for (size_t i = 0; i < rec.states.size(); ++i) {
    const GaussianState& g = rec.states[i];
    ConservationRow r;
    r.time = rec.times[i];
    r.energy = expectation_energy(g, dyn.potential(), dyn.mass()).total();
    if (i == 0) e0 = r.energy;
    r.energy_error = std::abs(r.energy - e0);
    r.norm_error = std::abs(norm(g, dyn.mass()) - 1.0);
    r.classical_energy = classical_energy(state_q(g), state_p(g), dyn.potential(), dyn.mass());
    r.effective_energy = dyn.effective_energy(g);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace gwp
