#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "gwpdyn/diagnostics.hpp"
#include "gwpdyn/energy.hpp"
#include "gwpdyn/errors.hpp"
#include "oracles.hpp"

using namespace gwp;
using oracle::vec1;
using oracle::vec2;

namespace {

const cplx I(0.0, 1.0);

std::shared_ptr<const Potential> morse2d_ptr() {
  return std::make_shared<CoupledMorse>(CoupledMorse::from_anharmonicities(
      0.0, vec2(1, 1), 11.25, vec2(0.02, 0.017), 5.75, vec2(0.014, 0.017)));
}

HagedornGaussian random_hagedorn(int d, std::mt19937& rng, const MassSpec& ms) {
  HellerGaussian g = oracle::random_heller(d, rng);
  g.q = oracle::random_vec(d, rng, 0.3) + Vec::Ones(d);
  return heller_to_hagedorn(g, ms);
}

double relative(const Mat& a, const Mat& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

}  // namespace

TEST_CASE("flat coordinates round trip") {
  std::mt19937 rng(1);
  const MassSpec ms = MassSpec::scalar(3, 1.0, 1.0);
  const HagedornGaussian g = random_hagedorn(3, rng, ms);
  const Vec z = flatten(g);
  CHECK(z.size() == flat_size(3));
  const HagedornGaussian h = unflatten(z, g);
  CHECK((h.Q - g.Q).norm() == 0.0);
  CHECK((h.P - g.P).norm() == 0.0);
  CHECK(z(2 * 3 + 1) == g.Q(1, 0).real());
  const Mat b = symplectic_form(3, 2.0);
  CHECK((b + b.transpose()).norm() == 0.0);
}

TEST_CASE("kinetic Jacobian") {
  std::mt19937 rng(2);
  const MassSpec ms = MassSpec::make(oracle::random_spd(2, rng, 1.0), 1.0);
  CHECK(kinetic_jacobian(0.0, ms, 2).isIdentity());
  const Mat m = kinetic_jacobian(0.7, ms, 2);
  CHECK(symplecticity_defect(m, symplectic_form(2, 1.0)) < 1e-14);
  const HagedornGaussian g = random_hagedorn(2, rng, ms);
  const Mat fd = finite_difference_jacobian(
      [&](const Vec& z) { return flatten(kinetic_flow_hagedorn(unflatten(z, g), 0.7, ms)); }, flatten(g));
  CHECK((fd - m).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("potential Jacobian matches finite differences on 2D Morse") {
  std::mt19937 rng(3);
  const MassSpec ms = MassSpec::scalar(2, 1.0, 1.0);
  const auto pot = morse2d_ptr();
  for (MethodKind m : {MethodKind::vga, MethodKind::tga, MethodKind::ha}) {
    const Dynamics dyn(pot, ms, m, vec2(1.0, 1.0));
    const HagedornGaussian g = random_hagedorn(2, rng, ms);
    const double t = 0.05;
    auto map = [&](const Vec& z) {
      const HagedornGaussian h = unflatten(z, g);
      const Mat sigma = symmetrize(Mat(0.5 * (h.Q * h.Q.adjoint()).real()));
      return flatten(potential_flow_hagedorn(h, t, dyn.coefficients(h.q, sigma)));
    };
    const Mat fd = finite_difference_jacobian(map, flatten(g));
    CHECK(relative(potential_jacobian(g, t, dyn), fd) < 1e-5);
  }
}

TEST_CASE("potential flow symplecticity conditions") {
  std::mt19937 rng(4);
  const MassSpec ms = MassSpec::scalar(2, 1.0, 1.0);
  const Mat b = symplectic_form(2, 1.0);
  for (MethodKind m : {MethodKind::vga, MethodKind::ha}) {
    const Dynamics dyn(morse2d_ptr(), ms, m, vec2(1.0, 1.0));
    const HagedornGaussian g = random_hagedorn(2, rng, ms);
    const Mat k = potential_generator(g, dyn);
    CHECK(potential_symplectic_condition(k, b) < 1e-10 * std::max(1.0, k.norm()));
    CHECK(symplecticity_defect(potential_jacobian(g, 0.1, dyn), b) < 1e-9);
  }
}

TEST_CASE("harmonic potential Jacobian has no cross blocks") {
  std::mt19937 rng(5);
  const MassSpec ms = MassSpec::scalar(2, 1.0, 1.0);
  const auto h = std::make_shared<QuarticPotential>(make_harmonic(Vec::Zero(2), oracle::random_spd(2, rng, 1.0)));
  const Dynamics dyn(h, ms, MethodKind::vga);
  const Mat k = potential_generator(random_hagedorn(2, rng, ms), dyn);
  CHECK(k.block(2, 4, 2, 16).norm() == 0.0);
  CHECK(k.block(4, 0, 16, 2).norm() == 0.0);
}

TEST_CASE("analytic step Jacobians are symplectic and match finite differences") {
  std::mt19937 rng(6);
  const MassSpec ms = MassSpec::scalar(2, 1.0, 1.0);
  const Dynamics dyn(morse2d_ptr(), ms, MethodKind::vga);
  const HagedornGaussian g = random_hagedorn(2, rng, ms);
  const Mat b = symplectic_form(2, 1.0);
  for (const char* label : {"tvt-2", "vtv-2", "tvt-optimal-6"}) {
    const IntegratorSpec s = IntegratorSpec::from_label(label, Parametrization::hagedorn);
    const Mat ja = step_jacobian_analytic(g, 0.0625, s, dyn);
    CHECK(symplecticity_defect(ja, b) < 1e-9);
    CHECK(relative(ja, step_jacobian_fd(g, 0.0625, s, dyn)) < 1e-5);
  }
}

TEST_CASE("symplecticity series") {
  const MassSpec ms = MassSpec::scalar(2, 1.0, 1.0);
  const Dynamics dyn(morse2d_ptr(), ms, MethodKind::vga);
  const GaussianState g0 = make_normalized_heller(vec2(-0.75, 1.75), vec2(0, 0), I * CMat::Identity(2, 2), 0.0, 1.0);
  const auto zero = symplecticity_series(g0, IntegratorSpec::from_label("tvt-2", Parametrization::heller), dyn, 0.0625, 0, 1);
  REQUIRE(zero.defects.size() == 1);
  CHECK(zero.defects[0] == 0.0);
  const auto s = symplecticity_series(g0, IntegratorSpec::from_label("tvt-optimal-4", Parametrization::hagedorn), dyn,
                                      0.0625, 32, 8, JacobianMode::both);
  CHECK(s.defects.size() == 5);
  for (double v : s.defects) CHECK(v < 1e-8);
  for (double v : s.chain_differences) CHECK(v < 1e-5);
  CHECK(s.counters.potential_evaluations == 32 * 5);
  const auto r = symplecticity_series(g0, IntegratorSpec::from_label("rk4", Parametrization::hagedorn), dyn, 0.0625, 32, 32);
  CHECK(r.defects.back() > 1e3 * s.defects.back());
}

TEST_CASE("reversibility and convergence helpers") {
  const MassSpec ms = MassSpec::scalar(2, 1.0, 1.0);
  const Dynamics dyn(morse2d_ptr(), ms, MethodKind::vga);
  const GaussianState g0 = make_normalized_heller(vec2(-0.75, 1.75), vec2(0, 0), I * CMat::Identity(2, 2), 0.0, 1.0);
  const IntegratorSpec s = IntegratorSpec::from_label("tvt-2", Parametrization::hagedorn);
  CHECK(reversibility_defect(g0, s, dyn, 0.1, 0) == 0.0);
  CHECK(reversibility_defect(g0, s, dyn, 0.1, 100) < 1e-11);
  CHECK(reversibility_defect(g0, IntegratorSpec::from_label("rk4", Parametrization::hagedorn), dyn, 0.1, 100) > 1e-9);
  CHECK_THROWS_AS(convergence_error(g0, s, dyn, 0.3, 1.0), Error);
  std::vector<std::pair<double, double>> pts;
  for (double dt : {0.1, 0.05, 0.025, 0.0125}) pts.emplace_back(dt, convergence_error(g0, s, dyn, dt, 1.0));
  CHECK(order_fit(pts, roundoff_plateau(1.0)).slope == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("order fit") {
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k < 6; ++k) {
    const double dt = std::pow(0.5, k);
    pts.emplace_back(dt, 0.7 * dt * dt * dt);
  }
  CHECK(std::abs(order_fit(pts, 0.0).slope - 3.0) < 1e-6);
  pts.emplace_back(1e-4, 1e-15);
  pts.emplace_back(5e-5, 2e-15);
  const OrderFit f = order_fit(pts, roundoff_plateau(1.0));
  CHECK(f.points_used == 6);
  CHECK(std::abs(f.slope - 3.0) < 1e-6);
  CHECK_THROWS_AS(order_fit({{1.0, 1.0}, {0.5, 0.1}}, 0.0), Error);
}

TEST_CASE("conservation series") {
  const MassSpec ms = MassSpec::scalar(1, 1.0, 1.0);
  const auto dw = std::make_shared<QuarticPotential>(make_double_well(1.0, 5.0, 2.5));
  const GaussianState g0 = make_normalized_heller(vec1(-1.42), vec1(0), CMat::Constant(1, 1, 4.0 * I), 0.0, 1.0);
  const IntegratorSpec s = IntegratorSpec::from_label("tvt-optimal-6", Parametrization::hagedorn);

  const Dynamics tga(dw, ms, MethodKind::tga);
  const auto rt = conservation_series(propagate(g0, s, tga, 0.001, 2000, 200), tga);
  CHECK(std::abs(rt.front().classical_energy - 1.083) < 1e-3);
  double ecl = 0.0, veff = 0.0;
  for (const auto& row : rt) {
    ecl = std::max(ecl, std::abs(row.classical_energy - rt.front().classical_energy));
    veff = std::max(veff, std::abs(row.effective_energy - row.energy));
  }
  CHECK(ecl < 1e-8);
  CHECK(veff > 0.0);

  const Dynamics vga(dw, ms, MethodKind::vga);
  const auto rv = conservation_series(propagate(g0, s, vga, 0.001, 2000, 200), vga);
  for (const auto& row : rv) {
    CHECK(std::abs(row.effective_energy - row.energy) < 1e-12 * std::max(1.0, std::abs(row.energy)));
    CHECK(row.energy_error < 1e-8);
    CHECK(row.norm_error < 1e-12);
  }
}
