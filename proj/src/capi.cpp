#include "gwpdyn/gwpdyn.h"

#include <cstring>
#include <new>
#include <string>

#include "gwpdyn/energy.hpp"
#include "gwpdyn/errors.hpp"
#include "gwpdyn/propagators.hpp"
#include "runner/experiments.hpp"
#include "runner/presets.hpp"
#include "runner/run_config.hpp"

struct gwp_config {
  gwp::runner::Config cfg;
};

struct gwp_system {
  gwp::runner::SystemSetup setup;
  gwp::MethodKind method = gwp::MethodKind::vga;
};

struct gwp_state {
  gwp::GaussianState g;
};

namespace {

thread_local std::string t_error;
thread_local std::string t_error_key;
thread_local std::string t_output_path;

gwp_status status_of(gwp::ErrorCode c) {
  switch (c) {
    case gwp::ErrorCode::invalid_argument: return GWP_ERR_INVALID_ARGUMENT;
    case gwp::ErrorCode::invalid_state: return GWP_ERR_INVALID_STATE;
    case gwp::ErrorCode::not_normalized: return GWP_ERR_NOT_NORMALIZED;
    case gwp::ErrorCode::degenerate_pair: return GWP_ERR_DEGENERATE_PAIR;
    case gwp::ErrorCode::substep_too_large: return GWP_ERR_SUBSTEP_TOO_LARGE;
    case gwp::ErrorCode::range: return GWP_ERR_RANGE;
    case gwp::ErrorCode::unsupported: return GWP_ERR_UNSUPPORTED;
    case gwp::ErrorCode::config: return GWP_ERR_CONFIG;
    case gwp::ErrorCode::io: return GWP_ERR_IO;
  }
  return GWP_ERR_INTERNAL;
}

gwp_status set_error(gwp_status s, const std::string& message, const std::string& key = {}) {
  t_error = message;
  t_error_key = key;
  return s;
}

// Runs f, mapping exceptions to status codes.
template <class F>
gwp_status guarded(F&& f) {
  try {
    t_error.clear();
    t_error_key.clear();
    return f();
  } catch (const gwp::Error& e) {
    return set_error(status_of(e.code()), e.what(), e.key());
  } catch (const std::bad_alloc&) {
    return set_error(GWP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(GWP_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(GWP_ERR_INTERNAL, "unknown error");
  }
}

gwp_status null_arg(const char* name) {
  return set_error(GWP_ERR_INVALID_ARGUMENT, std::string(name) + " must not be NULL");
}

int dim_of(const gwp_state* s) { return gwp::state_dim(s->g); }

}  // namespace

extern "C" {

const char* gwp_version(void) { return "1.0.0"; }

const char* gwp_status_name(gwp_status status) {
  switch (status) {
    case GWP_OK: return "ok";
    case GWP_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case GWP_ERR_INVALID_STATE: return "invalid_state";
    case GWP_ERR_NOT_NORMALIZED: return "not_normalized";
    case GWP_ERR_DEGENERATE_PAIR: return "degenerate_pair";
    case GWP_ERR_SUBSTEP_TOO_LARGE: return "substep_too_large";
    case GWP_ERR_RANGE: return "range";
    case GWP_ERR_UNSUPPORTED: return "unsupported";
    case GWP_ERR_CONFIG: return "config";
    case GWP_ERR_IO: return "io";
    case GWP_ERR_CHECK_FAILED: return "check_failed";
    case GWP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* gwp_last_error(void) { return t_error.c_str(); }
const char* gwp_last_error_key(void) { return t_error_key.c_str(); }
const char* gwp_last_output_path(void) { return t_output_path.c_str(); }

gwp_status gwp_config_parse(const char* text, gwp_config** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new gwp_config{gwp::runner::Config::parse(text)};
    return GWP_OK;
  });
}

gwp_status gwp_config_load(const char* path, gwp_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new gwp_config{gwp::runner::Config::load(path)};
    return GWP_OK;
  });
}

gwp_status gwp_config_preset(const char* name, int paper_scale, gwp_config** out) {
  if (!name) return null_arg("name");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new gwp_config{gwp::runner::preset_config(name, paper_scale != 0)};
    return GWP_OK;
  });
}

gwp_status gwp_config_set(gwp_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_arg("cfg");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  return guarded([&] {
    cfg->cfg.set(key, value);
    return GWP_OK;
  });
}

gwp_status gwp_config_get(const gwp_config* cfg, const char* key, char* buf, size_t len) {
  if (!cfg) return null_arg("cfg");
  if (!key) return null_arg("key");
  if (!buf || len == 0) return null_arg("buf");
  return guarded([&] {
    const std::string& v = cfg->cfg.raw(key);
    const size_t n = std::min(len - 1, v.size());
    std::memcpy(buf, v.data(), n);
    buf[n] = '\0';
    return GWP_OK;
  });
}

gwp_status gwp_config_dump(const gwp_config* cfg, char* buf, size_t len, size_t* needed) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    const std::string text = cfg->cfg.dump();
    if (needed) *needed = text.size() + 1;
    if (buf && len > 0) {
      const size_t n = std::min(len - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
    return GWP_OK;
  });
}

void gwp_config_free(gwp_config* cfg) { delete cfg; }

size_t gwp_preset_count(void) { return gwp::runner::preset_list().size(); }

const char* gwp_preset_name(size_t index) {
  const auto& l = gwp::runner::preset_list();
  return index < l.size() ? l[index].name.c_str() : nullptr;
}

const char* gwp_preset_description(size_t index) {
  const auto& l = gwp::runner::preset_list();
  return index < l.size() ? l[index].description.c_str() : nullptr;
}

gwp_status gwp_run(const gwp_config* cfg, const char* output_dir, gwp_run_summary* summary) {
  if (!cfg) return null_arg("cfg");
  if (!output_dir) return null_arg("output_dir");
  return guarded([&] {
    const gwp::runner::RunConfig rc = gwp::runner::build_run_config(cfg->cfg);
    const gwp::runner::RunResult r = gwp::runner::run_experiment(rc, output_dir);
    t_output_path = r.path;
    if (summary) {
      summary->potential_evaluations = r.potential_evaluations;
      summary->wall_seconds = r.wall_seconds;
      summary->rows_written = r.rows;
    }
    if (!r.checks_passed) return set_error(GWP_ERR_CHECK_FAILED, "expect-check comparison failed: " + r.path);
    return GWP_OK;
  });
}

gwp_status gwp_system_create(const gwp_config* cfg, gwp_system** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto* s = new gwp_system;
    try {
      s->setup = gwp::runner::build_system(cfg->cfg);
      if (cfg->cfg.has("method"))
        for (const auto& m : cfg->cfg.strs("method"))
          if (m != "grid") {
            s->method = gwp::runner::method_kind(m, "method");
            break;
          }
    } catch (...) {
      delete s;
      throw;
    }
    *out = s;
    return GWP_OK;
  });
}

int gwp_system_dim(const gwp_system* sys) { return sys ? sys->setup.potential->dim() : 0; }

void gwp_system_free(gwp_system* sys) { delete sys; }

gwp_status gwp_state_create(const gwp_config* cfg, const gwp_system* sys, gwp_state** out) {
  if (!cfg) return null_arg("cfg");
  if (!sys) return null_arg("sys");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new gwp_state{gwp::runner::build_initial(cfg->cfg, sys->setup)};
    return GWP_OK;
  });
}

gwp_status gwp_state_create_heller(const gwp_system* sys, const double* q, const double* p,
                                   const double* a_real, const double* a_imag, gwp_state** out) {
  if (!sys) return null_arg("sys");
  if (!q || !p || !a_real || !a_imag) return null_arg("q, p, a_real and a_imag");
  if (!out) return null_arg("out");
  return guarded([&] {
    const int d = sys->setup.potential->dim();
    gwp::CMat a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = gwp::cplx(a_real[i * d + j], a_imag[i * d + j]);
    *out = new gwp_state{gwp::make_normalized_heller(Eigen::Map<const gwp::Vec>(q, d),
                                                     Eigen::Map<const gwp::Vec>(p, d), a, 0.0,
                                                     sys->setup.mass.hbar)};
    return GWP_OK;
  });
}

gwp_status gwp_state_clone(const gwp_state* s, gwp_state** out) {
  if (!s) return null_arg("s");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new gwp_state{s->g};
    return GWP_OK;
  });
}

void gwp_state_free(gwp_state* s) { delete s; }

gwp_status gwp_state_position(const gwp_state* s, double* q) {
  if (!s) return null_arg("s");
  if (!q) return null_arg("q");
  const gwp::Vec v = gwp::state_q(s->g);
  std::memcpy(q, v.data(), sizeof(double) * v.size());
  return GWP_OK;
}

gwp_status gwp_state_momentum(const gwp_state* s, double* p) {
  if (!s) return null_arg("s");
  if (!p) return null_arg("p");
  const gwp::Vec v = gwp::state_p(s->g);
  std::memcpy(p, v.data(), sizeof(double) * v.size());
  return GWP_OK;
}

gwp_status gwp_state_width(const gwp_state* s, double* a_real, double* a_imag) {
  if (!s) return null_arg("s");
  if (!a_real || !a_imag) return null_arg("a_real and a_imag");
  return guarded([&] {
    const gwp::CMat a = gwp::width_matrix(s->g);
    const int d = dim_of(s);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        a_real[i * d + j] = a(i, j).real();
        a_imag[i * d + j] = a(i, j).imag();
      }
    return GWP_OK;
  });
}

gwp_status gwp_state_norm(const gwp_state* s, const gwp_system* sys, double* norm) {
  if (!s) return null_arg("s");
  if (!sys) return null_arg("sys");
  if (!norm) return null_arg("norm");
  return guarded([&] {
    *norm = gwp::norm(s->g, sys->setup.mass);
    return GWP_OK;
  });
}

gwp_status gwp_state_energy(const gwp_state* s, const gwp_system* sys, double* kinetic, double* potential) {
  if (!s) return null_arg("s");
  if (!sys) return null_arg("sys");
  return guarded([&] {
    const gwp::EnergyParts e = gwp::energy(s->g, *sys->setup.potential, sys->setup.mass);
    if (kinetic) *kinetic = e.kinetic;
    if (potential) *potential = e.potential;
    return GWP_OK;
  });
}

gwp_status gwp_state_distance(const gwp_state* a, const gwp_state* b, const gwp_system* sys, double* distance) {
  if (!a || !b) return null_arg("a and b");
  if (!sys) return null_arg("sys");
  if (!distance) return null_arg("distance");
  return guarded([&] {
    *distance = gwp::distance(a->g, b->g, sys->setup.mass);
    return GWP_OK;
  });
}

gwp_status gwp_state_overlap(const gwp_state* a, const gwp_state* b, const gwp_system* sys, double* re,
                             double* im) {
  if (!a || !b) return null_arg("a and b");
  if (!sys) return null_arg("sys");
  return guarded([&] {
    const gwp::cplx v = gwp::overlap(a->g, b->g, sys->setup.mass);
    if (re) *re = v.real();
    if (im) *im = v.imag();
    return GWP_OK;
  });
}

gwp_status gwp_propagate(gwp_state* s, const gwp_system* sys, const char* integrator,
                         const char* parametrization, double dt, long n_steps, long* potential_evaluations) {
  if (!s) return null_arg("s");
  if (!sys) return null_arg("sys");
  if (!integrator) return null_arg("integrator");
  return guarded([&] {
    const std::string par = parametrization ? parametrization : "hagedorn";
    gwp::Parametrization p;
    if (par == "heller") p = gwp::Parametrization::heller;
    else if (par == "hagedorn") p = gwp::Parametrization::hagedorn;
    else gwp::fail(gwp::ErrorCode::invalid_argument, "parametrization must be heller or hagedorn");
    if (n_steps < 0) gwp::fail(gwp::ErrorCode::invalid_argument, "n_steps must be non-negative");
    const gwp::IntegratorSpec spec = gwp::IntegratorSpec::from_label(integrator, p);
    const gwp::Dynamics dyn(sys->setup.potential, sys->setup.mass, sys->method, sys->setup.ha_reference);
    gwp::Counters c;
    s->g = gwp::propagate_final(s->g, spec, dyn, dt, n_steps, &c);
    if (potential_evaluations) *potential_evaluations = c.potential_evaluations;
    return GWP_OK;
  });
}

}  // extern "C"
