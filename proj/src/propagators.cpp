#include "gwpdyn/propagators.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "gwpdyn/energy.hpp"
#include "gwpdyn/errors.hpp"

namespace gwp {

namespace {

constexpr cplx kI(0.0, 1.0);

Mat sigma_of(const HellerGaussian& g, double hbar) {
  return symmetrize(Mat(0.5 * hbar * Mat(g.a.imag()).inverse()));
}

Mat sigma_of(const HagedornGaussian& g, double hbar) {
  return symmetrize(Mat(0.5 * hbar * (g.Q * g.Q.adjoint()).real()));
}

CMat width_of(const HagedornGaussian& g) {
  return symmetrize(CMat(g.P * g.Q.partialPivLu().inverse()));
}

// log det(I + t m^-1 A) after checking that m + tA factors off the branch cut.
cplx kinetic_log_det(const CMat& a, double t, const MassSpec& ms) {
  const CMat mc = ms.m.cast<cplx>();
  const CMat ta = t * a;
  SymmetricLdlt f(CMat(mc + ta));
  if (!f.ok() || f.on_branch_cut())
    fail(ErrorCode::substep_too_large, "kinetic substep crosses the log-det branch cut");
  return log_det_ratio(mc, ta);
}

template <class State>
State axpy(const State& x, double h, const State& d);

template <>
HellerGaussian axpy(const HellerGaussian& x, double h, const HellerGaussian& d) {
  return {x.q + h * d.q, x.p + h * d.p, x.a + h * d.a, x.gamma + h * d.gamma};
}

template <>
HagedornGaussian axpy(const HagedornGaussian& x, double h, const HagedornGaussian& d) {
  HagedornGaussian r;
  r.q = x.q + h * d.q;
  r.p = x.p + h * d.p;
  r.Q = x.Q + h * d.Q;
  r.P = x.P + h * d.P;
  r.S = x.S + h * d.S;
  r.log_det_q = x.log_det_q + h * d.log_det_q;
  return r;
}

HellerGaussian derivative(const HellerGaussian& g, const Dynamics& dyn) {
  const MassSpec& ms = dyn.mass();
  const Coefficients c = dyn.coefficients(g.q, sigma_of(g, ms.hbar));
  const CMat mi = ms.m_inv.cast<cplx>();
  HellerGaussian d;
  d.q = ms.m_inv * g.p;
  d.p = -c.v1;
  d.a = -g.a * mi * g.a - c.v2.cast<cplx>();
  d.gamma = ms.kinetic(g.p) - c.v0 + 0.5 * kI * ms.hbar * (mi * g.a).trace();
  return d;
}

HagedornGaussian derivative(const HagedornGaussian& g, const Dynamics& dyn) {
  const MassSpec& ms = dyn.mass();
  const Coefficients c = dyn.coefficients(g.q, sigma_of(g, ms.hbar));
  const CMat mi = ms.m_inv.cast<cplx>();
  HagedornGaussian d;
  d.q = ms.m_inv * g.p;
  d.p = -c.v1;
  d.Q = mi * g.P;
  d.P = -c.v2.cast<cplx>() * g.Q;
  d.S = ms.kinetic(g.p) - c.v0;
  d.log_det_q = (mi * g.P * g.Q.partialPivLu().inverse()).trace();
  return d;
}

template <class State>
State rk4(const State& g, double dt, const Dynamics& dyn) {
  const State k1 = derivative(g, dyn);
  const State k2 = derivative(axpy(g, 0.5 * dt, k1), dyn);
  const State k3 = derivative(axpy(g, 0.5 * dt, k2), dyn);
  const State k4 = derivative(axpy(g, dt, k3), dyn);
  State r = axpy(g, dt / 6.0, k1);
  r = axpy(r, dt / 3.0, k2);
  r = axpy(r, dt / 3.0, k3);
  return axpy(r, dt / 6.0, k4);
}

}  // namespace

const char* to_string(MethodKind k) {
  switch (k) {
    case MethodKind::vga: return "vga";
    case MethodKind::tga: return "tga";
    case MethodKind::ha: return "ha";
  }
  return "?";
}

const char* to_string(Base b) {
  switch (b) {
    case Base::vtv: return "vtv";
    case Base::tvt: return "tvt";
    case Base::rk4: return "rk4";
  }
  return "?";
}

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::none: return "none";
    case Scheme::triple_jump: return "triple_jump";
    case Scheme::suzuki: return "suzuki";
    case Scheme::optimal: return "optimal";
  }
  return "?";
}

const char* to_string(Parametrization p) {
  return p == Parametrization::heller ? "heller" : "hagedorn";
}

Dynamics::Dynamics(PotentialPtr pot, MassSpec ms, MethodKind method, Vec ha_ref)
    : pot_(std::move(pot)), ms_(std::move(ms)), method_(method), ha_ref_(std::move(ha_ref)) {
  if (!pot_) fail(ErrorCode::invalid_argument, "dynamics needs a potential");
  if (ms_.dim() != pot_->dim())
    fail(ErrorCode::invalid_argument, "mass and potential dimensions differ");
  if (method_ == MethodKind::ha) {
    if (ha_ref_.size() != pot_->dim())
      fail(ErrorCode::invalid_argument, "HA reference geometry must have length D");
    ha_jet_ = pot_->pointwise(ha_ref_, 2);
  }
}

double Dynamics::ha_value(const Vec& q) const {
  const Vec x = q - ha_ref_;
  return ha_jet_.v0 + ha_jet_.v1.dot(x) + 0.5 * x.dot(ha_jet_.v2 * x);
}

Coefficients Dynamics::coefficients(const Vec& q, const Mat& sigma) const {
  Coefficients c;
  switch (method_) {
    case MethodKind::vga: {
      const MomentBundle m = pot_->moments(q, sigma, 2);
      c.v0 = m.v0 - 0.5 * (m.v2.cwiseProduct(sigma)).sum();
      c.v1 = m.v1;
      c.v2 = m.v2;
      break;
    }
    case MethodKind::tga: {
      const Derivatives d = pot_->pointwise(q, 2);
      c.v0 = d.v0;
      c.v1 = d.v1;
      c.v2 = d.v2;
      break;
    }
    case MethodKind::ha:
      c.v0 = ha_value(q);
      c.v1 = ha_jet_.v1 + ha_jet_.v2 * (q - ha_ref_);
      c.v2 = ha_jet_.v2;
      break;
  }
  return c;
}

double Dynamics::effective_energy(const GaussianState& g) const {
  const Covariances cov = covariances(g, ms_.hbar);
  const Vec& q = state_q(g);
  const Coefficients c = coefficients(q, cov.sigma);
  return ms_.kinetic(state_p(g)) + 0.5 * (ms_.m_inv.cwiseProduct(cov.pi)).sum() + c.v0 +
         0.5 * (c.v2.cwiseProduct(cov.sigma)).sum();
}

void IntegratorSpec::validate() const {
  if (base == Base::rk4) return;
  if (order < 2 || order > 10 || order % 2 != 0)
    fail(ErrorCode::invalid_argument, "integrator order must be one of 2, 4, 6, 8, 10");
  if (order == 2 && scheme != Scheme::none)
    fail(ErrorCode::invalid_argument, "order 2 requires scheme none");
  if (order > 2 && scheme == Scheme::none)
    fail(ErrorCode::invalid_argument, "orders above 2 need a composition scheme");
}

std::string IntegratorSpec::label() const {
  if (base == Base::rk4) return "rk4";
  std::string s = to_string(base);
  if (scheme != Scheme::none) s += std::string("-") + to_string(scheme);
  return s + "-" + std::to_string(order);
}

IntegratorSpec IntegratorSpec::from_label(const std::string& label, Parametrization p) {
  IntegratorSpec spec;
  spec.parametrization = p;
  if (label == "rk4") {
    spec.base = Base::rk4;
    spec.order = 4;
    return spec;
  }
  std::vector<std::string> parts;
  std::stringstream ss(label);
  for (std::string item; std::getline(ss, item, '-');) parts.push_back(item);
  auto bad = [&]() -> IntegratorSpec {
    fail(ErrorCode::invalid_argument, "unrecognized integrator label '" + label + "'");
  };
  if (parts.size() < 2 || parts.size() > 3) return bad();
  if (parts[0] == "vtv")
    spec.base = Base::vtv;
  else if (parts[0] == "tvt")
    spec.base = Base::tvt;
  else
    return bad();
  if (parts.size() == 3) {
    if (parts[1] == "triple_jump")
      spec.scheme = Scheme::triple_jump;
    else if (parts[1] == "suzuki")
      spec.scheme = Scheme::suzuki;
    else if (parts[1] == "optimal")
      spec.scheme = Scheme::optimal;
    else
      return bad();
  }
  try {
    spec.order = std::stoi(parts.back());
  } catch (const std::exception&) {
    return bad();
  }
  spec.validate();
  return spec;
}

HellerGaussian kinetic_flow_heller(const HellerGaussian& g, double t, const MassSpec& ms) {
  const CMat mt = ms.m.cast<cplx>() + t * g.a;
  SymmetricLdlt f(mt);
  if (!f.ok() || f.on_branch_cut())
    fail(ErrorCode::substep_too_large, "kinetic substep crosses the log-det branch cut");
  HellerGaussian h;
  h.q = g.q + t * (ms.m_inv * g.p);
  h.p = g.p;
  h.a = symmetrize(CMat(g.a - t * g.a * f.solve(g.a)));
  h.gamma = g.gamma + t * ms.kinetic(g.p) + 0.5 * kI * ms.hbar * log_det_ratio(ms.m.cast<cplx>(), t * g.a);
  return h;
}

HagedornGaussian kinetic_flow_hagedorn(const HagedornGaussian& g, double t, const MassSpec& ms) {
  HagedornGaussian h = g;
  h.log_det_q = g.log_det_q + kinetic_log_det(width_of(g), t, ms);
  h.q = g.q + t * (ms.m_inv * g.p);
  h.Q = g.Q + t * (ms.m_inv.cast<cplx>() * g.P);
  h.S = g.S + t * ms.kinetic(g.p);
  return h;
}

HellerGaussian potential_flow_heller(const HellerGaussian& g, double t, const Coefficients& c) {
  HellerGaussian h = g;
  h.p = g.p - t * c.v1;
  h.a = g.a - t * c.v2.cast<cplx>();
  h.gamma = g.gamma - t * c.v0;
  return h;
}

HagedornGaussian potential_flow_hagedorn(const HagedornGaussian& g, double t,
                                         const Coefficients& c) {
  HagedornGaussian h = g;
  h.p = g.p - t * c.v1;
  h.P = g.P - t * (c.v2.cast<cplx>() * g.Q);
  h.S = g.S - t * c.v0;
  return h;
}

GaussianState apply_substep(const GaussianState& g, const Substep& s, double dt,
                            const Dynamics& dyn, Counters* counters) {
  const double t = s.fraction * dt;
  const MassSpec& ms = dyn.mass();
  if (counters) ++counters->substeps;
  if (s.kind == FlowKind::kinetic) {
    if (const auto* h = std::get_if<HellerGaussian>(&g)) return kinetic_flow_heller(*h, t, ms);
    return kinetic_flow_hagedorn(std::get<HagedornGaussian>(g), t, ms);
  }
  if (counters) ++counters->potential_evaluations;
  if (const auto* h = std::get_if<HellerGaussian>(&g))
    return potential_flow_heller(*h, t, dyn.coefficients(h->q, sigma_of(*h, ms.hbar)));
  const auto& hg = std::get<HagedornGaussian>(g);
  return potential_flow_hagedorn(hg, t, dyn.coefficients(hg.q, sigma_of(hg, ms.hbar)));
}

GaussianState second_order_step(const GaussianState& g, double dt, Base base, const Dynamics& dyn,
                                Counters* counters) {
  IntegratorSpec spec;
  spec.base = base;
  return step(g, dt, spec, dyn, counters);
}

GaussianState rk4_step(const GaussianState& g, double dt, const Dynamics& dyn,
                       Counters* counters) {
  if (counters) {
    counters->potential_evaluations += 4;
    counters->substeps += 1;
  }
  if (const auto* h = std::get_if<HellerGaussian>(&g)) return rk4(*h, dt, dyn);
  return rk4(std::get<HagedornGaussian>(g), dt, dyn);
}

GaussianState step(const GaussianState& g, double dt, const IntegratorSpec& spec,
                   const Dynamics& dyn, Counters* counters) {
  if (spec.base == Base::rk4) return rk4_step(g, dt, dyn, counters);
  GaussianState s = g;
  for (const auto& sub : substep_program(spec)) s = apply_substep(s, sub, dt, dyn, counters);
  return s;
}

GaussianState to_parametrization(const GaussianState& g, Parametrization p, const MassSpec& ms) {
  if (p == Parametrization::heller) return as_heller(g, ms);
  if (const auto* h = std::get_if<HellerGaussian>(&g)) return heller_to_hagedorn(*h, ms);
  return g;
}

namespace {

template <class Visit>
void run_steps(const GaussianState& g0, const IntegratorSpec& spec, const Dynamics& dyn, double dt,
               long n_steps, Counters* counters, Visit&& visit) {
  spec.validate();
  if (n_steps < 0) fail(ErrorCode::invalid_argument, "n_steps must be nonnegative");
  GaussianState s = to_parametrization(g0, spec.parametrization, dyn.mass());
  visit(0L, s);
  std::vector<Substep> prog;
  if (spec.base != Base::rk4) prog = substep_program(spec);
  for (long n = 1; n <= n_steps; ++n) {
    try {
      if (spec.base == Base::rk4) {
        s = rk4_step(s, dt, dyn, counters);
      } else {
        for (const auto& sub : prog) s = apply_substep(s, sub, dt, dyn, counters);
      }
    } catch (const Error& e) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " (step %ld)", n);
      throw Error(e.code(), e.what() + std::string(buf), e.key());
    }
    visit(n, s);
  }
}

}  // namespace

PropagationRecord propagate(const GaussianState& g0, const IntegratorSpec& spec,
                            const Dynamics& dyn, double dt, long n_steps, long stride) {
  if (stride < 1) fail(ErrorCode::invalid_argument, "stride must be positive");
  const auto start = std::chrono::steady_clock::now();
  PropagationRecord rec;
  run_steps(g0, spec, dyn, dt, n_steps, &rec.counters, [&](long n, const GaussianState& s) {
    if (n % stride == 0) {
      rec.times.push_back(static_cast<double>(n) * dt);
      rec.states.push_back(s);
    }
  });
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

GaussianState propagate_final(const GaussianState& g0, const IntegratorSpec& spec,
                              const Dynamics& dyn, double dt, long n_steps, Counters* counters) {
  GaussianState last = g0;
  run_steps(g0, spec, dyn, dt, n_steps, counters,
            [&](long, const GaussianState& s) { last = s; });
  return last;
}

}  // namespace gwp
