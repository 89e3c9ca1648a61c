#include "runner/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include "gwpdyn/energy.hpp"
#include "gwpdyn/errors.hpp"

namespace gwp::runner {

namespace {

const char* kVersion = "1.0.0";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void footer(const std::string& line) { footer_.push_back(line); }
  int rows() const { return static_cast<int>(rows_.size()); }

  void write(const std::string& path, const RunConfig& cfg, long evaluations, double wall) const {
    std::ofstream f(path);
    if (!f) fail(ErrorCode::io, "cannot write '" + path + "'");
    f << "# gwpdyn " << kVersion << "\n# experiment = " << to_string(cfg.experiment) << "\n";
    std::string line;
    for (char c : cfg.canonical) {
      if (c == '\n') {
        f << "# config " << line << "\n";
        line.clear();
      } else {
        line += c;
      }
    }
    for (size_t i = 0; i < header_.size(); ++i) f << (i ? "," : "") << header_[i];
    f << "\n";
    for (const auto& r : rows_) {
      for (size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << r[i];
      f << "\n";
    }
    for (const auto& l : footer_) f << "# " << l << "\n";
    f << "# potential_evaluations = " << evaluations << "\n";
    f << "# wall_seconds = " << fmt(wall) << "\n";
    if (!f) fail(ErrorCode::io, "error while writing '" + path + "'");
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::string> footer_;
};

// Runs f(0..n-1) on a pool of worker threads; the first failure is rethrown.
void parallel_for(int n, const std::function<void(int)>& f) {
  const int workers = std::max(1, std::min(n, sweep_threads()));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex m;
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(m);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

Dynamics dynamics_for(const RunConfig& cfg, const std::string& method) {
  return Dynamics(cfg.system.potential, cfg.system.mass, method_kind(method, "method"), cfg.system.ha_reference);
}

double total_energy(const GaussianState& g, const Dynamics& dyn) {
  return expectation_energy(g, dyn.potential(), dyn.mass()).total();
}

void append_vec(std::vector<std::string>& row, const Vec& v) {
  for (int i = 0; i < v.size(); ++i) row.push_back(fmt(v(i)));
}

void append_names(std::vector<std::string>& header, const std::string& prefix, int d) {
  for (int i = 0; i < d; ++i) header.push_back(prefix + std::to_string(i + 1));
}

struct GridSeries {
  std::vector<GridObservables> obs;
};

GridSeries run_grid(const RunConfig& cfg) {
  const MassSpec& ms = cfg.system.mass;
  GridState s = grid_init(cfg.initial, cfg.grid, ms);
  const GridPropagator prop(cfg.grid, *cfg.system.potential, ms, cfg.grid_dt);
  const long per_record = std::lround(cfg.dt * cfg.stride / cfg.grid_dt);
  GridSeries out;
  out.obs.push_back(grid_observables(s, *cfg.system.potential, ms));
  for (long k = cfg.stride; k <= cfg.n_steps; k += cfg.stride) {
    prop.run(s, per_record);
    out.obs.push_back(grid_observables(s, *cfg.system.potential, ms));
  }
  return out;
}

RunResult propagate_experiment(const RunConfig& cfg, std::unique_ptr<Table>& holder) {
  const int d = cfg.system.potential->dim();
  RunResult res;
  const std::string& method = cfg.methods[0];
  if (method == "grid") {
    std::vector<std::string> header = {"time", "energy", "norm_error"};
    append_names(header, "q", d);
    holder = std::make_unique<Table>(header);
    const GridSeries g = run_grid(cfg);
    for (size_t i = 0; i < g.obs.size(); ++i) {
      std::vector<std::string> row = {fmt(static_cast<double>(i) * cfg.stride * cfg.dt), fmt(g.obs[i].energy),
                                      fmt(std::abs(g.obs[i].norm - 1.0))};
      append_vec(row, g.obs[i].mean_q);
      holder->add(row);
    }
  } else {
    std::vector<std::string> header = {"time", "energy", "energy_error", "norm_error", "classical_energy",
                                       "effective_energy"};
    append_names(header, "q", d);
    append_names(header, "p", d);
    holder = std::make_unique<Table>(header);
    const Dynamics dyn = dynamics_for(cfg, method);
    const PropagationRecord rec = propagate(cfg.initial, cfg.integrators[0], dyn, cfg.dt, cfg.n_steps, cfg.stride);
    const auto rows = conservation_series(rec, dyn);
    for (size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      std::vector<std::string> row = {fmt(r.time), fmt(r.energy), fmt(r.energy_error), fmt(r.norm_error),
                                      fmt(r.classical_energy), fmt(r.effective_energy)};
      append_vec(row, state_q(rec.states[i]));
      append_vec(row, state_p(rec.states[i]));
      holder->add(row);
    }
    res.potential_evaluations = rec.counters.potential_evaluations;
  }
  return res;
}

RunResult compare_experiment(const RunConfig& cfg, std::unique_ptr<Table>& holder) {
  const int d = cfg.system.potential->dim();
  const int nm = static_cast<int>(cfg.methods.size());
  std::vector<std::string> header = {"time"};
  for (const auto& m : cfg.methods) {
    header.push_back(m + "_energy");
    header.push_back(m + "_norm_error");
    append_names(header, m + "_q", d);
  }
  holder = std::make_unique<Table>(header);
  const long records = cfg.n_steps / cfg.stride + 1;
  std::vector<std::vector<std::vector<double>>> cols(nm);
  std::vector<long> evals(nm, 0);
  parallel_for(nm, [&](int i) {
    const std::string& m = cfg.methods[i];
    auto& out = cols[i];
    if (m == "grid") {
      for (const auto& o : run_grid(cfg).obs) {
        std::vector<double> v = {o.energy, std::abs(o.norm - 1.0)};
        for (int a = 0; a < d; ++a) v.push_back(o.mean_q(a));
        out.push_back(v);
      }
    } else {
      const Dynamics dyn = dynamics_for(cfg, m);
      const PropagationRecord rec = propagate(cfg.initial, cfg.integrators[0], dyn, cfg.dt, cfg.n_steps, cfg.stride);
      for (const auto& g : rec.states) {
        std::vector<double> v = {total_energy(g, dyn), std::abs(norm(g, dyn.mass()) - 1.0)};
        const Vec q = state_q(g);
        for (int a = 0; a < d; ++a) v.push_back(q(a));
        out.push_back(v);
      }
      evals[i] = rec.counters.potential_evaluations;
    }
  });
  RunResult res;
  for (long k = 0; k < records; ++k) {
    std::vector<std::string> row = {fmt(static_cast<double>(k) * cfg.stride * cfg.dt)};
    for (int i = 0; i < nm; ++i)
      for (double v : cols[i][k]) row.push_back(fmt(v));
    holder->add(row);
  }
  for (long e : evals) res.potential_evaluations += e;
  return res;
}

RunResult converge_experiment(const RunConfig& cfg, std::unique_ptr<Table>& holder) {
  holder = std::make_unique<Table>(std::vector<std::string>{
      "integrator", "dt", "n_steps", "error", "energy_error", "norm_error", "potential_evaluations"});
  const Dynamics dyn = dynamics_for(cfg, cfg.methods[0]);
  const double e0 = total_energy(cfg.initial, dyn);

  struct Task {
    int spec;
    double dt;
    GaussianState final_state;
    Counters counters;
  };
  std::vector<Task> tasks;
  std::map<std::pair<int, double>, int> index;
  for (int s = 0; s < static_cast<int>(cfg.integrators.size()); ++s)
    for (double dt : cfg.converge_dts)
      for (double h : {dt, 0.5 * dt})
        if (!index.count({s, h})) {
          index[{s, h}] = static_cast<int>(tasks.size());
          tasks.push_back({s, h, cfg.initial, {}});
        }
  parallel_for(static_cast<int>(tasks.size()), [&](int i) {
    Task& t = tasks[i];
    const long n = std::lround(cfg.t_final / t.dt);
    t.final_state = propagate_final(cfg.initial, cfg.integrators[t.spec], dyn, t.dt, n, &t.counters);
  });

  RunResult res;
  for (const auto& t : tasks) res.potential_evaluations += t.counters.potential_evaluations;
  for (int s = 0; s < static_cast<int>(cfg.integrators.size()); ++s) {
    std::vector<std::pair<double, double>> points;
    for (double dt : cfg.converge_dts) {
      const Task& coarse = tasks[index.at({s, dt})];
      const Task& fine = tasks[index.at({s, 0.5 * dt})];
      const double err = distance(coarse.final_state, fine.final_state, dyn.mass());
      points.emplace_back(dt, err);
      holder->add({cfg.integrators[s].label(), fmt(dt), std::to_string(std::lround(cfg.t_final / dt)), fmt(err),
                   fmt(std::abs(total_energy(coarse.final_state, dyn) - e0)),
                   fmt(std::abs(norm(coarse.final_state, dyn.mass()) - 1.0)),
                   std::to_string(coarse.counters.potential_evaluations)});
    }
    try {
      const OrderFit fit = order_fit(points, cfg.fit_min, cfg.fit_max);
      holder->footer("fit " + cfg.integrators[s].label() + " slope = " + fmt(fit.slope) +
                     " points = " + std::to_string(fit.points_used));
    } catch (const Error&) {
      holder->footer("fit " + cfg.integrators[s].label() + " slope = insufficient");
    }
  }
  return res;
}

RunResult symplecticity_experiment(const RunConfig& cfg, std::unique_ptr<Table>& holder) {
  const bool both = cfg.jacobian == JacobianMode::both;
  std::vector<std::string> header = {"integrator", "time", "defect"};
  if (both) header.push_back("chain_difference");
  holder = std::make_unique<Table>(header);
  const Dynamics dyn = dynamics_for(cfg, cfg.methods[0]);
  const int n = static_cast<int>(cfg.integrators.size());
  std::vector<SymplecticitySeries> series(n);
  parallel_for(n, [&](int i) {
    series[i] = symplecticity_series(cfg.initial, cfg.integrators[i], dyn, cfg.dt, cfg.n_steps, cfg.stride,
                                     cfg.jacobian);
  });
  RunResult res;
  for (int i = 0; i < n; ++i) {
    const auto& s = series[i];
    for (size_t k = 0; k < s.times.size(); ++k) {
      std::vector<std::string> row = {cfg.integrators[i].label(), fmt(s.times[k]), fmt(s.defects[k])};
      if (both) row.push_back(s.chain_differences.empty() ? "0" : fmt(s.chain_differences[k]));
      holder->add(row);
    }
    res.potential_evaluations += s.counters.potential_evaluations;
  }
  return res;
}

RunResult reversibility_experiment(const RunConfig& cfg, std::unique_ptr<Table>& holder) {
  holder = std::make_unique<Table>(
      std::vector<std::string>{"integrator", "time", "energy_error", "norm_error", "reversibility_defect"});
  const Dynamics dyn = dynamics_for(cfg, cfg.methods[0]);
  const int n = static_cast<int>(cfg.integrators.size());
  struct Row {
    double time, energy_error, norm_error, rev;
  };
  std::vector<std::vector<Row>> rows(n);
  std::vector<long> evals(n, 0);
  parallel_for(n, [&](int i) {
    const IntegratorSpec& spec = cfg.integrators[i];
    const PropagationRecord rec = propagate(cfg.initial, spec, dyn, cfg.dt, cfg.n_steps, cfg.stride);
    const GaussianState& start = rec.states.front();
    const double e0 = total_energy(start, dyn);
    Counters back;
    for (size_t k = 0; k < rec.states.size(); ++k) {
      const long steps = static_cast<long>(k) * cfg.stride;
      const GaussianState fb = propagate_final(rec.states[k], spec, dyn, -cfg.dt, steps, &back);
      rows[i].push_back({rec.times[k], std::abs(total_energy(rec.states[k], dyn) - e0),
                         std::abs(norm(rec.states[k], dyn.mass()) - 1.0), distance(fb, start, dyn.mass())});
    }
    evals[i] = rec.counters.potential_evaluations + back.potential_evaluations;
  });
  RunResult res;
  for (int i = 0; i < n; ++i) {
    for (const Row& r : rows[i])
      holder->add({cfg.integrators[i].label(), fmt(r.time), fmt(r.energy_error), fmt(r.norm_error), fmt(r.rev)});
    res.potential_evaluations += evals[i];
  }
  return res;
}

RunResult expect_experiment(const RunConfig& cfg, std::unique_ptr<Table>& holder) {
  holder = std::make_unique<Table>(std::vector<std::string>{"quantity", "value", "expected", "tolerance", "pass"});
  const MassSpec& ms = cfg.system.mass;
  const Potential& pot = *cfg.system.potential;
  const EnergyParts e = energy(cfg.initial, pot, ms);
  const std::map<std::string, double> values = {
      {"energy", e.total()},
      {"kinetic", e.kinetic},
      {"potential", e.potential},
      {"classical_energy", classical_energy(cfg.initial.q, cfg.initial.p, pot, ms)},
      {"norm", norm(cfg.initial, ms)},
  };
  RunResult res;
  for (const auto& [q, expected] : cfg.expect) {
    const double v = values.at(q);
    const bool ok = std::abs(v - expected) <= cfg.expect_tolerance;
    res.checks_passed = res.checks_passed && ok;
    holder->add({q, fmt(v), fmt(expected), fmt(cfg.expect_tolerance), ok ? "1" : "0"});
  }
  return res;
}

}  // namespace

int sweep_threads() {
  if (const char* env = std::getenv("GWPDYN_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RunResult run_experiment(const RunConfig& cfg, const std::string& output_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) fail(ErrorCode::io, "cannot create output directory '" + output_dir + "'");
  const auto start = std::chrono::steady_clock::now();
  std::unique_ptr<Table> table;
  RunResult res;
  switch (cfg.experiment) {
    case Experiment::propagate: res = propagate_experiment(cfg, table); break;
    case Experiment::compare: res = compare_experiment(cfg, table); break;
    case Experiment::converge: res = converge_experiment(cfg, table); break;
    case Experiment::symplecticity: res = symplecticity_experiment(cfg, table); break;
    case Experiment::reversibility: res = reversibility_experiment(cfg, table); break;
    case Experiment::expect_check: res = expect_experiment(cfg, table); break;
  }
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.path = (fs::path(output_dir) / (cfg.output_prefix + ".csv")).string();
  res.rows = table->rows();
  table->write(res.path, cfg, res.potential_evaluations, res.wall_seconds);
  return res;
}

}  // namespace gwp::runner
