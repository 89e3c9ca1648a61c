#include "runner/presets.hpp"

#include <cstdio>

#include "gwpdyn/errors.hpp"

namespace gwp::runner {

namespace {

const char* kDoubleWell = R"(
system.dim = 1
system.hbar = 1
system.mass = 1
potential.kind = double_well
potential.a = 1
potential.b = 5
potential.c = 2.5
initial.p0 = 0
initial.a0_imag = 4
method = [vga, tga, ha, grid]
method.ha_reference = -1
integrator = tvt-2
dt = 0.001
stride = 10
grid.n = 512
grid.lo = -10
grid.hi = 10
)";

const char* kMorse2d = R"(
system.dim = 2
system.hbar = 1
system.mass = 1
potential.kind = morse
potential.v_eq = 0
potential.q_eq = [1, 1]
potential.de_prime = 11.25
potential.chi_prime = [0.02, 0.017]
potential.de = 5.75
potential.chi = [0.014, 0.017]
initial.q0 = [-0.75, 1.75]
initial.p0 = [0, 0]
initial.a0_imag = [1, 1]
)";

// Twenty Morse modes with chi' spread uniformly over [0.001, 0.005].
std::string morse20d_system() {
  std::string chi_p = "[", chi = "[", a0 = "[";
  char buf[64];
  for (int j = 0; j < 20; ++j) {
    const double c = 0.001 + 0.004 * j / 19.0;
    const char* sep = j + 1 < 20 ? ", " : "]";
    std::snprintf(buf, sizeof buf, "%.17g%s", c, sep);
    chi_p += buf;
    std::snprintf(buf, sizeof buf, "%.17g%s", 0.75 * c, sep);
    chi += buf;
    std::snprintf(buf, sizeof buf, "%.17g%s", 4.0 * 0.075 * 0.75 * c, sep);
    a0 += buf;
  }
  return "system.dim = 20\nsystem.hbar = 1\nsystem.mass = 1\npotential.kind = morse\n"
         "potential.v_eq = 0\npotential.q_eq = 0\npotential.de_prime = 0.1\n"
         "potential.chi_prime = " + chi_p + "\npotential.de = 0.075\npotential.chi = " + chi +
         "\ninitial.q0 = 0\ninitial.p0 = 0\ninitial.a0_imag = " + a0 + "\n";
}

// Steps 1024/n on a half-octave ladder from 4 to 512.
std::string desk_converge_steps() {
  std::string out = "[";
  char buf[32];
  const int divisors[] = {256, 192, 128, 96, 64, 48, 32, 24, 16, 12, 8, 6, 4, 3, 2};
  for (int n : divisors) {
    std::snprintf(buf, sizeof buf, "%s%.17g", out.size() > 1 ? ", " : "", 1024.0 / n);
    out += buf;
  }
  return out + "]";
}

const char* kSymplecticSpecs =
    "[tvt-2, tvt-optimal-4, tvt-optimal-6, tvt-optimal-8, tvt-optimal-10, tvt-triple_jump-4, "
    "tvt-suzuki-4, rk4]";

}  // namespace

const std::vector<PresetInfo>& preset_list() {
  static const std::vector<PresetInfo> list = {
      {"dw-over", "double well, q0 = -1.42: over-the-barrier motion, VGA/TGA/HA/grid"},
      {"dw-tunnel", "double well, q0 = -0.95: VGA tunneling vs. TGA, VGA/TGA/HA/grid"},
      {"dw-hard", "anharmonic double well b = 7.5, c = 3.75: converged 6th-order VGA vs. grid"},
      {"dw-over-check", "initial energy and TGA classical energy of the dw-over state"},
      {"morse1d", "1D Morse, V_eq = 10, q_eq = 1.5: VGA/TGA/HA/grid"},
      {"morse2d", "2D coupled Morse: VGA/TGA/HA/grid, 20000 steps of 0.001"},
      {"morse2d-symplecticity", "2D coupled Morse: symplecticity defect to t = 200, dt = 2^-4"},
      {"morse20d", "20D coupled Morse: VGA, 2^17 steps of 0.125"},
      {"morse20d-converge", "20D coupled Morse: convergence errors and fitted orders"},
      {"morse20d-reversibility", "20D coupled Morse: norm, energy and reversibility at dt = 8"},
  };
  return list;
}

Config preset_config(const std::string& name, bool paper_scale) {
  std::string text = "name = " + name + "\n";
  if (name == "dw-over") {
    text += kDoubleWell;
    text += "experiment = compare\ninitial.q0 = -1.42\nn_steps = 10000\n";
  } else if (name == "dw-tunnel") {
    text += kDoubleWell;
    text += "experiment = compare\ninitial.q0 = -0.95\nn_steps = 20000\n";
  } else if (name == "dw-hard") {
    text += R"(
experiment = compare
system.dim = 1
system.hbar = 1
system.mass = 1
potential.kind = double_well
potential.a = 1
potential.b = 7.5
potential.c = 3.75
initial.q0 = -1
initial.p0 = 0
initial.a0_imag = 4.9382716049382713
method = [vga, grid]
integrator = tvt-optimal-6
dt = 0.02
n_steps = 2500
stride = 10
grid.n = 512
grid.lo = -10
grid.hi = 10
grid.dt = 0.001
)";
  } else if (name == "dw-over-check") {
    text += R"(
experiment = expect-check
system.dim = 1
potential.kind = double_well
potential.a = 1
potential.b = 5
potential.c = 2.5
initial.q0 = -1.42
initial.p0 = 0
initial.a0_imag = 4
expect.energy = 5.36
expect.classical_energy = 1.083
expect.norm = 1
expect.tolerance = 0.01
)";
  } else if (name == "morse1d") {
    text += R"(
experiment = compare
system.dim = 1
system.hbar = 1
system.mass = 1
potential.kind = morse
potential.v_eq = 10
potential.q_eq = 1.5
potential.de_prime = 11.25
potential.chi_prime = 0.02
potential.de = 0
initial.q0 = 0
initial.p0 = 0
initial.a0_imag = 1
method = [vga, tga, ha, grid]
integrator = tvt-2
dt = 0.004
n_steps = 10000
stride = 10
grid.n = 512
grid.lo = -5
grid.hi = 25
)";
  } else if (name == "morse2d") {
    text += kMorse2d;
    text += R"(
experiment = compare
method = [vga, tga, ha, grid]
integrator = tvt-2
dt = 0.001
n_steps = 20000
stride = 100
grid.n = [256, 256]
grid.lo = [-3, -3]
grid.hi = [13, 13]
)";
  } else if (name == "morse2d-symplecticity") {
    text += kMorse2d;
    text += "experiment = symplecticity\nintegrator = ";
    text += kSymplecticSpecs;
    text += "\ndt = 0.0625\nn_steps = 3200\nstride = 32\n";
  } else if (name == "morse20d") {
    text += morse20d_system();
    text += "experiment = propagate\nintegrator = tvt-2\ndt = 0.125\nn_steps = 131072\nstride = 1024\n";
  } else if (name == "morse20d-converge") {
    text += morse20d_system();
    text += "experiment = converge\n"
            "integrator = [tvt-2, tvt-optimal-4, tvt-optimal-6, tvt-optimal-8, tvt-optimal-10, rk4]\n"
            "converge.fit_min = 1e-10\nconverge.fit_max = 1e-3\n";
    text += paper_scale ? "converge.t_final = 65536\nconverge.dt = [0.125, 0.25, 0.5, 1, 2, 4, 8]\n"
                        : "converge.t_final = 1024\nconverge.dt = " + desk_converge_steps() + "\n";
  } else if (name == "morse20d-reversibility") {
    text += morse20d_system();
    text += "experiment = reversibility\nintegrator = ";
    text += kSymplecticSpecs;
    text += "\ndt = 8\n";
    text += paper_scale ? "n_steps = 8192\nstride = 512\n" : "n_steps = 1000\nstride = 100\n";
  } else {
    throw Error(ErrorCode::config, "unknown preset '" + name + "'", "preset");
  }
  return Config::parse(text, "preset " + name);
}

}  // namespace gwp::runner
