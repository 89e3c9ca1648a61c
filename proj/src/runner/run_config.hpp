#pragma once

#include <map>
#include <string>
#include <vector>

#include "gwpdyn/diagnostics.hpp"
#include "gwpdyn/grid.hpp"
#include "gwpdyn/propagators.hpp"
#include "runner/config.hpp"

namespace gwp::runner {

enum class Experiment { propagate, converge, symplecticity, reversibility, compare, expect_check };

const char* to_string(Experiment e);

struct SystemSetup {
  PotentialPtr potential;
  MassSpec mass;
  Vec ha_reference;
};

struct RunConfig {
  std::string name;
  Experiment experiment = Experiment::propagate;
  SystemSetup system;
  HellerGaussian initial;
  /// vga, tga, ha or grid.
  std::vector<std::string> methods;
  std::vector<IntegratorSpec> integrators;
  double dt = 0.0;
  long n_steps = 0;
  long stride = 1;

  std::vector<double> converge_dts;
  double t_final = 0.0;
  /// Errors outside (fit_min, fit_max] are left out of order fits.
  double fit_min = 0.0;
  double fit_max = 0.0;

  bool has_grid = false;
  GridSpec grid;
  double grid_dt = 0.0;

  JacobianMode jacobian = JacobianMode::analytic;

  std::map<std::string, double> expect;
  double expect_tolerance = 0.0;

  std::string output_prefix;
  /// Canonical text of the source configuration, echoed into outputs.
  std::string canonical;
};

SystemSetup build_system(const Config& c);
HellerGaussian build_initial(const Config& c, const SystemSetup& sys);
/// Validates every key; errors name the offending key path.
RunConfig build_run_config(const Config& c);

MethodKind method_kind(const std::string& name, const std::string& key);

}  // namespace gwp::runner
