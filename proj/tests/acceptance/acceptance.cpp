// Acceptance suite: one PASS/FAIL line per criterion, with measured values.
//
// Usage: acceptance [criterion-id ...]   (default: all)
// Exit status is nonzero when a check fails that is not a known gap.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gwpdyn/diagnostics.hpp"
#include "gwpdyn/energy.hpp"
#include "gwpdyn/errors.hpp"
#include "gwpdyn/grid.hpp"
#include "harmonic_oracle.hpp"
#include "runner/presets.hpp"
#include "runner/run_config.hpp"

using namespace gwp;

namespace {

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

struct Outcome {
  bool pass = true;
  bool known_gap_only = false;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    details.push_back(std::string(ok ? "ok   " : "MISS ") + what);
    pass = pass && ok;
  }
};

runner::RunConfig preset(const std::string& name) {
  return runner::build_run_config(runner::preset_config(name, false));
}

Dynamics dynamics(const runner::RunConfig& rc, MethodKind m) {
  return Dynamics(rc.system.potential, rc.system.mass, m, rc.system.ha_reference);
}

double total_energy(const GaussianState& g, const Dynamics& dyn) {
  return expectation_energy(g, dyn.potential(), dyn.mass()).total();
}

double slope(const std::vector<std::pair<double, double>>& pts, double lo, double hi, int* used) {
  try {
    const OrderFit f = order_fit(pts, lo, hi);
    *used = f.points_used;
    return f.slope;
  } catch (const Error&) {
    *used = 0;
    return std::nan("");
  }
}

// ---------------------------------------------------------------------------

Outcome energy_anchors() {
  Outcome o;
  const struct {
    const char* preset;
    double expected;
  } cases[] = {{"dw-over", 5.36}, {"dw-tunnel", 0.71}, {"dw-hard", 0.12}};
  for (const auto& c : cases) {
    const auto rc = preset(c.preset);
    const double e = energy(GaussianState(rc.initial), *rc.system.potential, rc.system.mass).total();
    o.check(std::abs(e - c.expected) <= 0.01, fmt("%s: E = %.5f (expected %.2f +- 0.01)", c.preset, e, c.expected));
  }
  const auto rc = preset("dw-over");
  const double ecl = classical_energy(rc.initial.q, rc.initial.p, *rc.system.potential, rc.system.mass);
  o.check(std::abs(ecl - 1.083) <= 0.001, fmt("dw-over: E_cl = %.6f (expected 1.083 +- 0.001)", ecl));
  return o;
}

// Shared 20D sweep: final states at t_f = 1024 for dt = 1024/n.
struct SweepPoint {
  double dt;
  double error;
  double energy_error;
  long evaluations;
};

struct Sweep {
  std::map<std::string, std::vector<SweepPoint>> points;
  std::map<std::string, int> order;
};

const Sweep& morse20d_sweep() {
  static Sweep sweep = [] {
    Sweep s;
    const auto rc = preset("morse20d");
    const Dynamics dyn = dynamics(rc, MethodKind::vga);
    const GaussianState g0 = rc.initial;
    const double t_final = 1024.0, e0 = total_energy(g0, dyn);
    const std::vector<long> ladder = {2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256};
    const std::vector<long> order2_extra = {512, 1024, 2048, 4096};
    const std::vector<std::pair<std::string, int>> specs = {
        {"tvt-2", 2}, {"tvt-optimal-4", 4}, {"tvt-optimal-6", 6}, {"tvt-optimal-8", 8},
        {"tvt-optimal-10", 10}, {"rk4", 4}};
    for (const auto& [label, order] : specs) {
      s.order[label] = order;
      const IntegratorSpec spec = IntegratorSpec::from_label(label, Parametrization::hagedorn);
      std::map<long, std::pair<GaussianState, long>> finals;
      auto final_state = [&](long n) -> const std::pair<GaussianState, long>& {
        auto it = finals.find(n);
        if (it == finals.end()) {
          Counters c;
          GaussianState g = propagate_final(g0, spec, dyn, t_final / n, n, &c);
          it = finals.emplace(n, std::make_pair(std::move(g), c.potential_evaluations)).first;
        }
        return it->second;
      };
      std::vector<long> ns = ladder;
      if (label == "tvt-2") ns.insert(ns.end(), order2_extra.begin(), order2_extra.end());
      for (long n : ns) {
        const auto& coarse = final_state(n);
        const double err = distance(coarse.first, final_state(2 * n).first, dyn.mass());
        const double de = std::abs(total_energy(coarse.first, dyn) - e0);
        s.points[label].push_back({t_final / n, err, de, coarse.second});
        // Both errors are on the roundoff floor: smaller steps add nothing.
        if (err < 1e-11 && de < 1e-15) break;
        finals.erase(n);
      }
    }
    return s;
  }();
  return sweep;
}

constexpr double kFitMin = 1e-10, kFitMax = 1e-3;

Outcome convergence_orders() {
  Outcome o;
  for (const auto& [label, pts] : morse20d_sweep().points) {
    std::vector<std::pair<double, double>> xy;
    for (const auto& p : pts) xy.emplace_back(p.dt, p.error);
    int used = 0;
    const double s = slope(xy, kFitMin, kFitMax, &used);
    const int order = morse20d_sweep().order.at(label);
    o.check(used >= 3 && std::abs(s - order) <= 0.5,
            fmt("%-15s slope %.3f over %d points (nominal %d +- 0.5)", label.c_str(), s, used, order));
  }
  o.details.push_back(fmt("     fit window %.0e < error <= %.0e, t_f = 1024, dt = 1024/n", kFitMin, kFitMax));
  return o;
}

Outcome energy_scaling() {
  Outcome o;
  const double lo = 1e-14, hi = 1e-6;
  for (const auto& [label, pts] : morse20d_sweep().points) {
    std::vector<std::pair<double, double>> xy;
    for (const auto& p : pts) xy.emplace_back(p.dt, p.energy_error);
    int used = 0;
    const double s = slope(xy, lo, hi, &used);
    const int order = morse20d_sweep().order.at(label);
    if (label == "rk4") {
      o.details.push_back(fmt("     %-15s slope %.3f over %d points (not symplectic; not asserted)", label.c_str(), s, used));
      continue;
    }
    o.check(used >= 3 && std::abs(s - order) <= 0.5,
            fmt("%-15s slope %.3f over %d points (nominal %d +- 0.5)", label.c_str(), s, used, order));
  }
  o.details.push_back(fmt("     fit window %.0e < |E(t_f) - E0| <= %.0e", lo, hi));
  return o;
}

// log-log interpolation of the evaluation count at which `target` is reached.
double evaluations_to_reach(const std::vector<SweepPoint>& pts, double target) {
  std::vector<SweepPoint> sorted = pts;
  std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.evaluations < b.evaluations; });
  for (size_t i = 1; i < sorted.size(); ++i) {
    const auto &a = sorted[i - 1], &b = sorted[i];
    if (a.error >= target && b.error <= target) {
      const double w = std::log(target / a.error) / std::log(b.error / a.error);
      return std::exp(std::log(double(a.evaluations)) + w * std::log(double(b.evaluations) / a.evaluations));
    }
  }
  return std::nan("");
}

Outcome exact_conservation() {
  Outcome o;
  const auto rc = preset("morse20d");
  const Dynamics dyn = dynamics(rc, MethodKind::vga);
  const double dt = 8.0;
  const long n = 1000;
  const std::vector<std::string> labels = {"tvt-2",          "tvt-optimal-4",     "tvt-optimal-6",
                                           "tvt-optimal-8",  "tvt-optimal-10",    "tvt-triple_jump-4",
                                           "tvt-suzuki-4",   "vtv-optimal-6",     "rk4"};
  bool symplectic_ok = true, rk4_ok = true;
  for (Parametrization par : {Parametrization::heller, Parametrization::hagedorn}) {
    double worst_norm = 0.0, worst_rev = 0.0, rk4_norm = 0.0, rk4_rev = 0.0;
    for (const auto& label : labels) {
      const IntegratorSpec spec = IntegratorSpec::from_label(label, par);
      const GaussianState g0 = to_parametrization(rc.initial, par, dyn.mass());
      const GaussianState fwd = propagate_final(g0, spec, dyn, dt, n);
      const double nerr = std::abs(norm(fwd, dyn.mass()) - 1.0);
      const GaussianState back = propagate_final(fwd, spec, dyn, -dt, n);
      const double rev = distance(back, g0, dyn.mass());
      if (spec.symplectic()) {
        worst_norm = std::max(worst_norm, nerr);
        worst_rev = std::max(worst_rev, rev);
        const bool ok = nerr < 1e-11 && rev < 1e-10;
        symplectic_ok = symplectic_ok && ok;
        if (!ok) o.details.push_back(fmt("MISS %s %s: norm error %.2e, reversibility %.2e", to_string(par), label.c_str(), nerr, rev));
      } else {
        rk4_norm = nerr;
        rk4_rev = rev;
      }
    }
    const double norm_orders = std::log10(rk4_norm / std::max(worst_norm, 1e-300));
    const double rev_orders = std::log10(rk4_rev / std::max(worst_rev, 1e-300));
    o.details.push_back(fmt("%s %-8s symplectic: max norm error %.2e (< 1e-11), max reversibility %.2e (< 1e-10)",
                            worst_norm < 1e-11 && worst_rev < 1e-10 ? "ok  " : "MISS", to_string(par), worst_norm, worst_rev));
    const bool sep = norm_orders >= 6.0 && rev_orders >= 6.0;
    rk4_ok = rk4_ok && sep;
    o.details.push_back(fmt("%s %-8s rk4: norm error %.2e (%.1f orders above), reversibility %.2e (%.1f orders above); need >= 6",
                            sep ? "ok  " : "MISS", to_string(par), rk4_norm, norm_orders, rk4_rev, rev_orders));
  }
  o.pass = symplectic_ok && rk4_ok;
  o.known_gap_only = symplectic_ok && !rk4_ok;
  return o;
}

Outcome symplecticity() {
  Outcome o;
  const auto rc = preset("morse2d-symplecticity");
  const Dynamics dyn = dynamics(rc, MethodKind::vga);
  const double dt = 0.0625;
  const long n = 3200, stride = 32;
  std::map<std::string, SymplecticitySeries> series;
  for (const auto& spec : rc.integrators)
    series[spec.label()] = symplecticity_series(rc.initial, spec, dyn, dt, n, stride,
                                                spec.symplectic() ? JacobianMode::both : JacobianMode::finite_difference);
  const double rk4_final = series.at("rk4").defects.back();
  o.details.push_back(fmt("     rk4 defect at t = %.0f: %.3e", series.at("rk4").times.back(), rk4_final));
  for (const auto& [label, s] : series) {
    if (label == "rk4") continue;
    const double peak = *std::max_element(s.defects.begin(), s.defects.end());
    const double chain = *std::max_element(s.chain_differences.begin(), s.chain_differences.end());
    const double orders = std::log10(rk4_final / s.defects.back());
    o.check(peak < 1e-8 && orders >= 3.0 && chain < 1e-5,
            fmt("%-18s max defect %.2e (< 1e-8), %.1f orders below rk4 (>= 3), chain vs FD %.1e (< 1e-5)",
                label.c_str(), peak, orders, chain));
  }
  return o;
}

double relative_difference(const MomentBundle& a, const MomentBundle& b) {
  return max_abs_difference(a, b) / std::max(1.0, max_abs_entry(b));
}

Vec v1(double x) { return Vec::Constant(1, x); }
Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

QuarticPotential quartic_2d() {
  Tensor3 c3(2);
  Tensor4 c4(2);
  const Vec dirs[] = {v2(1.0, 0.3), v2(-0.4, 0.9), v2(0.7, -0.6)};
  const double w3[] = {0.8, -1.1, 0.5}, w4[] = {1.2, 0.7, 0.9};
  for (int r = 0; r < 3; ++r)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          c3(i, j, k) += w3[r] * dirs[r](i) * dirs[r](j) * dirs[r](k);
          for (int l = 0; l < 2; ++l) c4(i, j, k, l) += w4[r] * dirs[r](i) * dirs[r](j) * dirs[r](k) * dirs[r](l);
        }
  Mat c2(2, 2);
  c2 << -2.0, 0.4, 0.4, 1.5;
  return QuarticPotential(v2(0.3, -0.2), 0.7, v2(0.5, -1.0), c2, c3, c4);
}

cplx trapezoid_overlap(const GaussianState& a, const GaussianState& b, const MassSpec& ms, double lo,
                       double hi, int n) {
  const int d = state_dim(a);
  const double h = (hi - lo) / (n - 1);
  std::vector<Vec> pts;
  std::vector<double> w;
  if (d == 1) {
    for (int i = 0; i < n; ++i) {
      pts.push_back(v1(lo + i * h));
      w.push_back((i == 0 || i == n - 1) ? 0.5 * h : h);
    }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        pts.push_back(v2(lo + i * h, lo + j * h));
        w.push_back(((i == 0 || i == n - 1) ? 0.5 : 1.0) * ((j == 0 || j == n - 1) ? 0.5 : 1.0) * h * h);
      }
  }
  const auto fa = evaluate_wavefunction(a, pts, ms);
  const auto fb = evaluate_wavefunction(b, pts, ms);
  cplx sum = 0.0;
  for (size_t k = 0; k < pts.size(); ++k) sum += w[k] * std::conj(fa[k]) * fb[k];
  return sum;
}

Outcome oracle_equivalence() {
  Outcome o;
  const QuarticPotential dw = make_double_well(1.0, 5.0, 2.5);
  const QuarticPotential q2 = quartic_2d();
  const CoupledMorse morse1d = CoupledMorse::from_anharmonicities(10.0, v1(1.5), 11.25, v1(0.02), 0.0, v1(0.0));
  const CoupledMorse morse2d =
      CoupledMorse::from_anharmonicities(0.0, v2(1, 1), 11.25, v2(0.02, 0.017), 5.75, v2(0.014, 0.017));
  Mat s_corr(2, 2);
  s_corr << 0.45, 0.12, 0.12, 0.3;
  const struct {
    const char* name;
    const Potential* pot;
    Vec q;
    Mat sigma;
    double tol;
  } cases[] = {
      {"double well, q = 0, Sigma = 1/8", &dw, v1(0.0), Mat::Constant(1, 1, 0.125), 1e-12},
      {"double well, q = -1.42, Sigma = 0.3", &dw, v1(-1.42), Mat::Constant(1, 1, 0.3), 1e-12},
      {"2D quartic, correlated Sigma", &q2, v2(0.4, -0.8), s_corr, 1e-12},
      {"1D Morse, q = 0, Sigma = 1/2", &morse1d, v1(0.0), Mat::Constant(1, 1, 0.5), 1e-8},
      {"2D Morse, q = (-0.75, 1.75), Sigma = I/2", &morse2d, v2(-0.75, 1.75), 0.5 * Mat::Identity(2, 2), 1e-8},
      {"2D Morse, correlated Sigma", &morse2d, v2(0.2, 1.4), s_corr, 1e-8},
  };
  for (const auto& c : cases) {
    const double r = relative_difference(c.pot->moments(c.q, c.sigma, 4), quadrature_moments(*c.pot, c.q, c.sigma, 4));
    o.check(r < c.tol, fmt("moments %-40s rel. difference %.1e (< %.0e)", c.name, r, c.tol));
  }

  const MassSpec ms1 = MassSpec::scalar(1, 1.0, 1.0), ms2 = MassSpec::scalar(2, 1.0, 1.0);
  const cplx I(0.0, 1.0);
  const GaussianState a1 = make_normalized_heller(v1(0.0), v1(0.0), CMat::Constant(1, 1, I), 0.0, 1.0);
  const GaussianState b1 = make_normalized_heller(v1(3.0), v1(0.0), CMat::Constant(1, 1, I), 0.0, 1.0);
  const GaussianState c1 = make_normalized_heller(v1(1.2), v1(-0.7), CMat::Constant(1, 1, 0.4 + 0.8 * I), 0.3, 1.0);
  CMat wa(2, 2), wb(2, 2);
  wa << 0.2 + 1.0 * I, 0.1 + 0.2 * I, 0.1 + 0.2 * I, -0.3 + 0.7 * I;
  wb << -0.1 + 0.6 * I, 0.3 - 0.1 * I, 0.3 - 0.1 * I, 0.4 + 1.3 * I;
  const GaussianState a2 = make_normalized_heller(v2(0.5, -0.3), v2(0.2, 0.6), wa, 0.0, 1.0);
  const GaussianState b2 = make_normalized_heller(v2(-0.4, 0.8), v2(-0.5, 0.1), wb, 0.1, 1.0);
  const struct {
    const char* name;
    GaussianState a, b;
    const MassSpec* ms;
    double lo, hi;
    int n;
  } pairs[] = {{"1D pair, q offset 3, A = i", a1, b1, &ms1, -12.0, 15.0, 4001},
               {"1D chirped pair", a1, c1, &ms1, -12.0, 15.0, 4001},
               {"2D correlated pair", a2, b2, &ms2, -9.0, 9.0, 601}};
  for (const auto& p : pairs) {
    const double diff = std::abs(overlap(p.a, p.b, *p.ms) - trapezoid_overlap(p.a, p.b, *p.ms, p.lo, p.hi, p.n));
    o.check(diff < 1e-7, fmt("overlap %-40s |analytic - quadrature| %.1e (< 1e-7)", p.name, diff));
  }
  return o;
}

// Richardson extrapolation of two split-operator runs with dt and dt/2.
GridState grid_reference(const GaussianState& g0, const GridSpec& spec, const Potential& pot,
                         const MassSpec& ms, double t, long n, double* self_convergence) {
  GridState coarse = grid_init(g0, spec, ms), fine = coarse;
  GridPropagator(spec, pot, ms, t / n).run(coarse, n);
  GridPropagator(spec, pot, ms, t / (2 * n)).run(fine, 2 * n);
  *self_convergence = grid_l2_difference(coarse, fine);
  GridState r = fine;
  for (size_t k = 0; k < r.psi.size(); ++k) r.psi[k] = (4.0 * fine.psi[k] - coarse.psi[k]) / 3.0;
  return r;
}

void harmonic_case(Outcome& o, const char* name, const Mat& k, const HellerGaussian& init, const Vec& ha_ref,
                   const GridSpec& grid, double omega_min, long grid_steps) {
  const int d = init.dim();
  const MassSpec ms = MassSpec::scalar(d, 1.0, 1.0);
  auto pot = std::make_shared<QuarticPotential>(make_harmonic(Vec::Zero(d), k));
  const double period = 2.0 * kPi / omega_min, t = 10.0 * period;
  const long n = 2560;
  const IntegratorSpec spec = IntegratorSpec::from_label("tvt-optimal-8", Parametrization::hagedorn);
  std::vector<std::pair<const char*, GaussianState>> finals;
  for (auto [label, m] : {std::pair{"VGA", MethodKind::vga}, {"TGA", MethodKind::tga}, {"HA", MethodKind::ha}})
    finals.emplace_back(label, propagate_final(GaussianState(init), spec, Dynamics(pot, ms, m, ha_ref), t / n, n));

  double worst = 0.0;
  for (size_t i = 0; i < finals.size(); ++i)
    for (size_t j = i + 1; j < finals.size(); ++j)
      worst = std::max(worst, distance(finals[i].second, finals[j].second, ms));
  o.check(worst < 1e-6, fmt("%s: max Gaussian-method distance after 10 periods %.1e (< 1e-6)", name, worst));

  double self = 0.0;
  const GridState ref = grid_reference(init, grid, *pot, ms, t, grid_steps, &self);
  double grid_worst = 0.0;
  for (const auto& [label, g] : finals) grid_worst = std::max(grid_worst, grid_l2_difference(ref, g, ms));
  o.check(grid_worst < 1e-6, fmt("%s: max L2 distance grid vs VGA/TGA/HA %.1e (< 1e-6; grid dt vs dt/2 %.1e)", name,
                                 grid_worst, self));

  // Closed form is available only for isotropic oscillators.
  if (k.isApprox(k(0, 0) * Mat::Identity(d, d))) {
    const HagedornGaussian exact =
        oracle::harmonic_exact(heller_to_hagedorn(init, ms), std::sqrt(k(0, 0)), t);
    double cf = 0.0;
    for (const auto& [label, g] : finals) cf = std::max(cf, distance(GaussianState(exact), g, ms));
    o.check(cf < 1e-6, fmt("%s: max distance to the closed-form solution %.1e (< 1e-6)", name, cf));
  }
}

Outcome harmonic_exactness() {
  Outcome o;
  const cplx I(0.0, 1.0);
  {
    const HellerGaussian g = make_normalized_heller(v1(1.5), v1(0.5), CMat::Constant(1, 1, 0.3 + 0.6 * I), 0.0, 1.0);
    harmonic_case(o, "1D, omega = 1", Mat::Identity(1, 1), g, v1(0.7), GridSpec{{256}, {-12.0}, {12.0}}, 1.0, 20000);
  }
  {
    // Rotated diag(1, 4): frequencies 1 and 2, common period 2 pi.
    const double c = std::cos(0.5), s = std::sin(0.5);
    Mat r(2, 2);
    r << c, -s, s, c;
    const Mat k = r * Vec(v2(1.0, 4.0)).asDiagonal() * r.transpose();
    CMat a(2, 2);
    a << 0.2 + 1.2 * I, 0.1 + 0.1 * I, 0.1 + 0.1 * I, -0.1 + 1.8 * I;
    const HellerGaussian g = make_normalized_heller(v2(1.0, -0.5), v2(0.3, 0.4), a, 0.0, 1.0);
    harmonic_case(o, "2D, coupled, omega = 1, 2", k, g, v2(-0.3, 0.2), GridSpec{{64, 64}, {-8.0, -8.0}, {8.0, 8.0}},
                  1.0, 40000);
  }
  return o;
}

Outcome tunneling() {
  Outcome o;
  const auto rc = preset("dw-tunnel");
  const IntegratorSpec spec = rc.integrators[0];
  const double dt = rc.dt;
  const long n = std::lround(20.0 / dt);
  o.details.push_back(fmt("     %s, dt = %g, t = 0..%g", spec.label().c_str(), dt, n * dt));
  double vga_max = -1e300, vga_first = -1.0, tga_max = -1e300;
  const auto vga = propagate(rc.initial, spec, dynamics(rc, MethodKind::vga), dt, n, 10);
  for (size_t i = 0; i < vga.states.size(); ++i) {
    const double q = state_q(vga.states[i])(0);
    vga_max = std::max(vga_max, q);
    if (vga_first < 0.0 && q > 0.3) vga_first = vga.times[i];
  }
  const auto tga = propagate(rc.initial, spec, dynamics(rc, MethodKind::tga), dt, n, 10);
  for (const auto& s : tga.states) tga_max = std::max(tga_max, state_q(s)(0));
  o.check(vga_first >= 0.0, fmt("VGA <q> max %.3f, first exceeds +0.3 at t = %.3f", vga_max, vga_first));
  o.check(tga_max < 0.0, fmt("TGA <q> max %.3f (< 0 throughout)", tga_max));
  return o;
}

Outcome cross_parametrization() {
  Outcome o;
  {
    const auto rc = preset("morse2d");
    const Dynamics dyn = dynamics(rc, MethodKind::vga);
    for (const char* label : {"tvt-2", "tvt-optimal-4", "vtv-optimal-8"}) {
      const auto heller = propagate(rc.initial, IntegratorSpec::from_label(label, Parametrization::heller), dyn,
                                    rc.dt, rc.n_steps, 10);
      const auto hag = propagate(rc.initial, IntegratorSpec::from_label(label, Parametrization::hagedorn), dyn,
                                 rc.dt, rc.n_steps, 10);
      double worst = 0.0;
      for (size_t i = 0; i < heller.states.size(); ++i)
        worst = std::max(worst, (width_matrix(heller.states[i]) - width_matrix(hag.states[i])).norm());
      o.check(worst < 1e-10, fmt("morse2d %-14s max ||A - P Q^-1|| over %ld steps %.1e (< 1e-10)", label,
                                 rc.n_steps, worst));
    }
  }

  // Heller vs Hagedorn discrepancy of one explicit update from the same state.
  const auto rc = preset("morse2d");
  const Dynamics dyn = dynamics(rc, MethodKind::vga);
  const HellerGaussian h0 = rc.initial;
  const HagedornGaussian g0 = heller_to_hagedorn(h0, dyn.mass());
  const Mat& minv = dyn.mass().m_inv;
  const Mat v2 = dyn.coefficients(h0.q, position_covariance(GaussianState(h0), dyn.mass().hbar)).v2;
  std::vector<std::pair<double, double>> euler, rk4;
  for (double dt : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
    const CMat a1 = h0.a - dt * (h0.a * minv * h0.a + v2);
    const CMat q1 = g0.Q + dt * minv * g0.P;
    const CMat p1 = g0.P - dt * v2 * g0.Q;
    euler.emplace_back(dt, (a1 - p1 * q1.inverse()).norm());
    const GaussianState rh = rk4_step(GaussianState(h0), dt, dyn);
    const GaussianState rg = rk4_step(GaussianState(g0), dt, dyn);
    rk4.emplace_back(dt, (width_matrix(rh) - width_matrix(rg)).norm());
  }
  int used = 0;
  const double s_euler = slope(euler, 0.0, 1e300, &used);
  o.check(std::abs(s_euler - 2.0) <= 0.5,
          fmt("first-order update A vs P Q^-1: slope %.3f (nominal 2 +- 0.5), discrepancy %.1e at dt = 0.2", s_euler,
              euler.front().second));
  const double s_rk4 = slope(rk4, 1e-15, 1e300, &used);
  o.details.push_back(fmt("     full RK4 step: discrepancy %.1e at dt = 0.2, slope %.2f over %d points (not asserted)",
                          rk4.front().second, s_rk4, used));

  const auto& sweep = morse20d_sweep().points;
  const double e2 = evaluations_to_reach(sweep.at("tvt-2"), 1e-6);
  const double e8 = evaluations_to_reach(sweep.at("tvt-optimal-8"), 1e-6);
  o.check(e2 / e8 >= 10.0, fmt("efficiency, 20D: error 1e-6 costs %.0f evaluations (order 2) vs %.0f (order 8), "
                               "ratio %.1f (>= 10)", e2, e8, e2 / e8));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"energy-anchors", energy_anchors},
      {"convergence-orders", convergence_orders},
      {"exact-conservation", exact_conservation},
      {"energy-scaling", energy_scaling},
      {"symplecticity", symplecticity},
      {"oracle-equivalence", oracle_equivalence},
      {"harmonic-exactness", harmonic_exactness},
      {"tunneling", tunneling},
      {"cross-parametrization", cross_parametrization},
  };
  std::set<std::string> selected(argv + 1, argv + argc);
  int passed = 0, failed = 0, unexpected = 0;
  for (const auto& [id, run] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.details.push_back(std::string("MISS exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s (%.1f s)%s\n", out.pass ? "PASS" : "FAIL", id.c_str(), secs,
                !out.pass && out.known_gap_only ? "  [known gap]" : "");
    for (const auto& d : out.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    (out.pass ? passed : failed) += 1;
    if (!out.pass && !out.known_gap_only) ++unexpected;
  }
  std::printf("%d passed, %d failed (%d unexpected)\n", passed, failed, unexpected);
  return unexpected == 0 ? 0 : 1;
}
