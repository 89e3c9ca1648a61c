#include "runner/run_config.hpp"

#include <cmath>

#include "gwpdyn/errors.hpp"

namespace gwp::runner {

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& message) {
  throw Error(ErrorCode::config, key + ": " + message, key);
}

// Runs f and re-labels library argument errors with the key that caused them.
template <class F>
auto keyed(const std::string& key, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) throw;
    throw Error(ErrorCode::config, key + ": " + e.what(), key);
  }
}

Mat matrix_from(const Config& c, const std::string& key, int d) {
  const auto v = c.nums(key);
  Mat m = Mat::Zero(d, d);
  if (static_cast<int>(v.size()) == d) {
    for (int i = 0; i < d; ++i) m(i, i) = v[i];
  } else if (static_cast<int>(v.size()) == d * d) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = v[i * d + j];
  } else if (v.size() == 1) {
    m = v[0] * Mat::Identity(d, d);
  } else {
    config_error(key, "expected 1, " + std::to_string(d) + " (diagonal) or " + std::to_string(d * d) +
                          " (row-major) entries, got " + std::to_string(v.size()));
  }
  return m;
}

PotentialPtr build_potential(const Config& c, int d) {
  const std::string kind = c.str("potential.kind");
  if (kind == "double_well") {
    if (d != 1) config_error("system.dim", "double_well requires dim = 1");
    return keyed("potential", [&] {
      return std::make_shared<QuarticPotential>(
          make_double_well(c.num("potential.a"), c.num("potential.b"), c.num("potential.c")));
    });
  }
  if (kind == "morse") {
    const double v_eq = c.num("potential.v_eq", 0.0);
    const Vec q_eq = c.vec("potential.q_eq", d, 0.0);
    const double de_p = c.num("potential.de_prime");
    const Vec chi_p = c.vec("potential.chi_prime", d);
    const double de = c.num("potential.de", 0.0);
    const Vec chi = c.vec("potential.chi", d, 0.0);
    return keyed("potential", [&] {
      return std::make_shared<CoupledMorse>(CoupledMorse::from_anharmonicities(v_eq, q_eq, de_p, chi_p, de, chi));
    });
  }
  if (kind == "harmonic") {
    const Mat k = matrix_from(c, "potential.k", d);
    const Vec q_ref = c.vec("potential.q_ref", d, 0.0);
    const double v0 = c.num("potential.v0", 0.0);
    return keyed("potential.k", [&] { return std::make_shared<QuarticPotential>(make_harmonic(q_ref, k, v0)); });
  }
  if (kind == "quartic_file") {
    const std::string path = c.str("potential.file");
    auto pot = keyed("potential.file", [&] { return std::make_shared<QuarticPotential>(read_quartic_file(path)); });
    if (pot->dim() != d) config_error("potential.file", "dimension differs from system.dim");
    return pot;
  }
  config_error("potential.kind", "unknown potential '" + kind + "' (double_well, morse, harmonic, quartic_file)");
}

Parametrization parametrization_of(const std::string& s, const std::string& key) {
  if (s == "heller") return Parametrization::heller;
  if (s == "hagedorn") return Parametrization::hagedorn;
  config_error(key, "expected heller or hagedorn");
}

Experiment experiment_of(const std::string& s) {
  if (s == "propagate") return Experiment::propagate;
  if (s == "converge") return Experiment::converge;
  if (s == "symplecticity") return Experiment::symplecticity;
  if (s == "reversibility") return Experiment::reversibility;
  if (s == "compare") return Experiment::compare;
  if (s == "expect-check") return Experiment::expect_check;
  config_error("experiment",
               "unknown experiment '" + s +
                   "' (propagate, converge, symplecticity, reversibility, compare, expect-check)");
}

bool is_integer_multiple(double a, double b) {
  const double r = a / b;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r) && std::round(r) >= 1.0;
}

}  // namespace

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::propagate: return "propagate";
    case Experiment::converge: return "converge";
    case Experiment::symplecticity: return "symplecticity";
    case Experiment::reversibility: return "reversibility";
    case Experiment::compare: return "compare";
    case Experiment::expect_check: return "expect-check";
  }
  return "?";
}

MethodKind method_kind(const std::string& name, const std::string& key) {
  if (name == "vga") return MethodKind::vga;
  if (name == "tga") return MethodKind::tga;
  if (name == "ha") return MethodKind::ha;
  config_error(key, "unknown method '" + name + "' (vga, tga, ha, grid)");
}

SystemSetup build_system(const Config& c) {
  const long d = c.integer("system.dim");
  if (d < 1 || d > 64) config_error("system.dim", "must be between 1 and 64");
  const int dim = static_cast<int>(d);
  const double hbar = c.num("system.hbar", 1.0);
  if (!(hbar > 0.0)) config_error("system.hbar", "must be positive");
  SystemSetup s;
  const Mat m = c.has("system.mass") ? matrix_from(c, "system.mass", dim) : Mat(Mat::Identity(dim, dim));
  s.mass = keyed("system.mass", [&] { return MassSpec::make(m, hbar); });
  s.potential = build_potential(c, dim);
  s.ha_reference = c.vec("method.ha_reference", dim, 0.0);
  if (!c.has("method.ha_reference")) {
    if (c.has("potential.q_eq")) s.ha_reference = c.vec("potential.q_eq", dim);
    else if (c.has("initial.q0")) s.ha_reference = c.vec("initial.q0", dim);
  }
  return s;
}

HellerGaussian build_initial(const Config& c, const SystemSetup& sys) {
  const int d = sys.potential->dim();
  const Vec q0 = c.vec("initial.q0", d);
  const Vec p0 = c.vec("initial.p0", d, 0.0);
  const Mat ai = matrix_from(c, "initial.a0_imag", d);
  const Mat ar = c.has("initial.a0_real") ? matrix_from(c, "initial.a0_real", d) : Mat(Mat::Zero(d, d));
  CMat a(d, d);
  a.real() = ar;
  a.imag() = ai;
  return keyed("initial.a0_imag", [&] { return make_normalized_heller(q0, p0, a, 0.0, sys.mass.hbar); });
}

RunConfig build_run_config(const Config& c) {
  RunConfig r;
  r.name = c.str("name", "run");
  r.experiment = experiment_of(c.str("experiment", "propagate"));
  r.system = build_system(c);
  r.initial = build_initial(c, r.system);
  const int d = r.system.potential->dim();

  const bool needs_dynamics = r.experiment != Experiment::expect_check;
  r.methods = c.has("method") ? c.strs("method") : std::vector<std::string>{"vga"};
  for (const auto& m : r.methods)
    if (m != "grid") method_kind(m, "method");
  const bool multi_method = r.experiment == Experiment::compare;
  if (!multi_method && r.methods.size() != 1) config_error("method", "this experiment takes a single method");
  if (r.experiment != Experiment::compare && r.experiment != Experiment::propagate)
    for (const auto& m : r.methods)
      if (m == "grid") config_error("method", "grid is only available for propagate and compare");

  const Parametrization par = parametrization_of(c.str("integrator.parametrization", "hagedorn"),
                                                 "integrator.parametrization");
  const bool fuse = c.flag("integrator.fuse", false);
  const std::vector<std::string> labels =
      c.has("integrator") ? c.strs("integrator") : std::vector<std::string>{"tvt-2"};
  for (const auto& label : labels) {
    IntegratorSpec s = keyed("integrator", [&] { return IntegratorSpec::from_label(label, par); });
    s.fuse = fuse;
    r.integrators.push_back(s);
  }
  if ((r.experiment == Experiment::propagate || r.experiment == Experiment::compare) && r.integrators.size() != 1)
    config_error("integrator", "this experiment takes a single integrator");

  if (r.experiment == Experiment::converge) {
    r.t_final = c.num("converge.t_final");
    for (double dt : c.nums("converge.dt")) {
      if (!(dt > 0.0)) config_error("converge.dt", "time steps must be positive");
      if (!is_integer_multiple(r.t_final, dt)) config_error("converge.dt", "t_final must be a multiple of every dt");
      r.converge_dts.push_back(dt);
    }
    if (r.converge_dts.empty()) config_error("converge.dt", "needs at least one time step");
    r.fit_min = c.num("converge.fit_min", roundoff_plateau(1.0));
    r.fit_max = c.num("converge.fit_max", 1.0);
    if (!(r.fit_min >= 0.0)) config_error("converge.fit_min", "must be non-negative");
    if (!(r.fit_max > r.fit_min)) config_error("converge.fit_max", "must exceed converge.fit_min");
  } else if (needs_dynamics) {
    r.dt = c.num("dt");
    if (!(r.dt > 0.0)) config_error("dt", "must be positive");
    r.n_steps = c.integer("n_steps");
    if (r.n_steps < 0) config_error("n_steps", "must be non-negative");
    r.stride = c.integer("stride", 1);
    if (r.stride < 1) config_error("stride", "must be positive");
  }

  for (const auto& m : r.methods)
    if (m == "grid") r.has_grid = true;
  if (r.has_grid) {
    const auto n = c.nums("grid.n");
    if (static_cast<int>(n.size()) != d) config_error("grid.n", "expected one entry per dimension");
    for (double v : n) r.grid.n.push_back(static_cast<int>(v));
    const Vec lo = c.vec("grid.lo", d), hi = c.vec("grid.hi", d);
    r.grid.lo.assign(lo.data(), lo.data() + d);
    r.grid.hi.assign(hi.data(), hi.data() + d);
    keyed("grid", [&] { r.grid.validate(); return 0; });
    r.grid_dt = c.num("grid.dt", r.dt);
    if (!(r.grid_dt > 0.0)) config_error("grid.dt", "must be positive");
    if (!is_integer_multiple(r.dt * r.stride, r.grid_dt))
      config_error("grid.dt", "dt * stride must be a multiple of grid.dt");
  }

  if (r.experiment == Experiment::symplecticity) {
    const std::string mode = c.str("symplecticity.jacobian", "analytic");
    if (mode == "analytic") r.jacobian = JacobianMode::analytic;
    else if (mode == "finite_difference") r.jacobian = JacobianMode::finite_difference;
    else if (mode == "both") r.jacobian = JacobianMode::both;
    else config_error("symplecticity.jacobian", "expected analytic, finite_difference or both");
    if (d > 4 && !c.flag("symplecticity.allow_large", false))
      config_error("symplecticity.allow_large", "symplecticity above D = 4 needs allow_large = true");
  }

  if (r.experiment == Experiment::expect_check) {
    for (const char* q : {"energy", "kinetic", "potential", "classical_energy", "norm"}) {
      const std::string key = std::string("expect.") + q;
      if (c.has(key)) r.expect[q] = c.num(key);
    }
    if (r.expect.empty()) config_error("expect", "expect-check needs at least one expect.* value");
    r.expect_tolerance = c.num("expect.tolerance");
    if (!(r.expect_tolerance >= 0.0)) config_error("expect.tolerance", "must be non-negative");
  }

  r.output_prefix = c.str("output.prefix", r.name);
  if (r.output_prefix.find('/') != std::string::npos) config_error("output.prefix", "must be a file name");
  c.require_all_used();
  r.canonical = c.dump();
  return r;
}

}  // namespace gwp::runner
