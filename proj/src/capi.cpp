#include "ymlab/ymlab.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include "ymlab/calculus.hpp"
#include "ymlab/config.hpp"
#include "ymlab/error.hpp"
#include "ymlab/norms.hpp"
#include "ymlab/runner.hpp"
#include "ymlab/snapshot.hpp"

struct ymlab_config {
  ymlab::ExperimentConfig cfg;
};

struct ymlab_field {
  ymlab::FormField f;
};

namespace {

thread_local std::string g_error;
thread_local long g_error_node = -1;

ymlab_status status_of(ymlab::ErrorCode c) {
  using ymlab::ErrorCode;
  switch (c) {
    case ErrorCode::Configuration: return YMLAB_CONFIG_ERROR;
    case ErrorCode::Divergence:
    case ErrorCode::HorizonTooLong: return YMLAB_DIVERGENCE;
    case ErrorCode::InvalidInput:
    case ErrorCode::InvalidDegree: return YMLAB_INVALID_ARGUMENT;
    case ErrorCode::Io: return YMLAB_IO_ERROR;
    case ErrorCode::Numeric: return YMLAB_NUMERIC_ERROR;
    case ErrorCode::InconsistentState: return YMLAB_INTERNAL;
  }
  return YMLAB_INTERNAL;
}

ymlab_status fail(ymlab_status s, std::string msg) {
  g_error = std::move(msg);
  return s;
}

template <class F>
ymlab_status guarded(F&& body) {
  g_error.clear();
  g_error_node = -1;
  try {
    return body();
  } catch (const ymlab::Error& e) {
    if (e.node()) g_error_node = static_cast<long>(*e.node());
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(YMLAB_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(YMLAB_INTERNAL, e.what());
  }
}

#define YMLAB_REQUIRE(cond, what) \
  if (!(cond)) return fail(YMLAB_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* ymlab_version(void) { return ymlab::kVersion; }
const char* ymlab_last_error(void) { return g_error.c_str(); }
long ymlab_last_error_node(void) { return g_error_node; }

const char* ymlab_status_string(ymlab_status s) {
  switch (s) {
    case YMLAB_OK: return "ok";
    case YMLAB_CHECK_FAILED: return "check failed";
    case YMLAB_CONFIG_ERROR: return "configuration error";
    case YMLAB_DIVERGENCE: return "divergence";
    case YMLAB_INVALID_ARGUMENT: return "invalid argument";
    case YMLAB_IO_ERROR: return "i/o error";
    case YMLAB_NUMERIC_ERROR: return "numeric error";
    case YMLAB_INTERNAL: return "internal error";
  }
  return "unknown";
}

ymlab_status ymlab_config_load(const char* path, ymlab_config** out) {
  YMLAB_REQUIRE(path && out, "null argument");
  return guarded([&] {
    *out = new ymlab_config{ymlab::load_config(path)};
    return YMLAB_OK;
  });
}

ymlab_status ymlab_config_parse(const char* text, const char* source, ymlab_config** out) {
  YMLAB_REQUIRE(text && out, "null argument");
  return guarded([&] {
    *out = new ymlab_config{ymlab::parse_config(text, source ? source : "config")};
    return YMLAB_OK;
  });
}

ymlab_status ymlab_config_set(ymlab_config* cfg, const char* key, const char* value) {
  YMLAB_REQUIRE(cfg && key && value, "null argument");
  return guarded([&] {
    ymlab::ExperimentConfig next = cfg->cfg;
    ymlab::set_config_value(next, key, value);
    ymlab::validate_config(next);
    cfg->cfg = std::move(next);
    return YMLAB_OK;
  });
}

ymlab_status ymlab_config_hash(const ymlab_config* cfg, char* buf, size_t size) {
  YMLAB_REQUIRE(cfg && buf && size >= 17, "need a buffer of at least 17 bytes");
  return guarded([&] {
    const std::string h = cfg->cfg.hash();
    std::memcpy(buf, h.c_str(), h.size() + 1);
    return YMLAB_OK;
  });
}

void ymlab_config_free(ymlab_config* cfg) { delete cfg; }

ymlab_status ymlab_run(const ymlab_config* cfg, const ymlab_run_options* opt) {
  YMLAB_REQUIRE(cfg && opt && opt->out_dir, "null argument");
  return guarded([&] {
    ymlab::RunOptions ro;
    ro.out_dir = opt->out_dir;
    if (opt->scenario) {
      ro.scenario = ymlab::parse_scenario(opt->scenario);
      if (!ro.scenario)
        return fail(YMLAB_CONFIG_ERROR, std::string("unknown scenario '") + opt->scenario + "'");
    }
    if (opt->has_seed) ro.seed = opt->seed;
    if (opt->snapshot_every >= 0) ro.snapshot_every = opt->snapshot_every;
    ro.threads = opt->threads;
    const ymlab::RunOutcome res = ymlab::run_experiment(cfg->cfg, ro);
    if (res.pass()) return YMLAB_OK;
    std::string msg = "failed checks:";
    for (const auto& e : res.report.entries())
      if (!e.pass) msg += " " + e.name;
    return fail(YMLAB_CHECK_FAILED, msg);
  });
}

ymlab_status ymlab_field_create(int n, double L, ymlab_group group, int degree,
                                ymlab_field** out) {
  YMLAB_REQUIRE(out, "null argument");
  YMLAB_REQUIRE(group == YMLAB_U1 || group == YMLAB_SU2, "unknown group");
  return guarded([&] {
    const auto g = group == YMLAB_U1 ? ymlab::GroupName::U1 : ymlab::GroupName::SU2;
    *out = new ymlab_field{ymlab::FormField(ymlab::Grid(n, L), g, degree)};
    return YMLAB_OK;
  });
}

ymlab_status ymlab_field_load(const char* path, ymlab_field** out) {
  YMLAB_REQUIRE(path && out, "null argument");
  return guarded([&] {
    *out = new ymlab_field{ymlab::read_snapshot(path)};
    return YMLAB_OK;
  });
}

ymlab_status ymlab_field_save(const ymlab_field* f, const char* path) {
  YMLAB_REQUIRE(f && path, "null argument");
  return guarded([&] {
    ymlab::write_snapshot(f->f, path);
    return YMLAB_OK;
  });
}

ymlab_status ymlab_field_data(ymlab_field* f, double** data, size_t* size) {
  YMLAB_REQUIRE(f && data && size, "null argument");
  *data = f->f.data().data();
  *size = f->f.data().size();
  return YMLAB_OK;
}

ymlab_status ymlab_field_lp_norm(const ymlab_field* f, double p, double* out) {
  YMLAB_REQUIRE(f && out, "null argument");
  return guarded([&] {
    *out = ymlab::lp_norm(f->f, p);
    return YMLAB_OK;
  });
}

ymlab_status ymlab_field_curvature(const ymlab_field* A, ymlab_field** out) {
  YMLAB_REQUIRE(A && out, "null argument");
  return guarded([&] {
    *out = new ymlab_field{ymlab::curvature(A->f)};
    return YMLAB_OK;
  });
}

void ymlab_field_free(ymlab_field* f) { delete f; }

}  // extern "C"
