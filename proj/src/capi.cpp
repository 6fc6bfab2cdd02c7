#include "ltbm/ltbm.h"

#include <new>
#include <sstream>
#include <string>

#include "ltbm/commands.hpp"
#include "ltbm/config.hpp"
#include "ltbm/errors.hpp"
#include "ltbm/geodesics.hpp"

struct ltbm_run {
  ltbm::RunConfig cfg;
  std::string records;
  std::string summary;
};

namespace {

thread_local std::string last_error;

ltbm_status to_status(ltbm::ErrorCode c) { return static_cast<ltbm_status>(static_cast<int>(c)); }

template <class F>
ltbm_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const ltbm::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown exception";
  }
  return LTBM_ERR_INTERNAL;
}

ltbm_status null_argument(const char* what) {
  last_error = std::string(what) + " is null";
  return LTBM_ERR_INVALID_ARGUMENT;
}

ltbm::Vec to_vec(const double* p, int n) {
  ltbm::Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = p[i];
  return v;
}

}  // namespace

extern "C" {

const char* ltbm_version(void) { return "1.0.0"; }

const char* ltbm_status_name(ltbm_status status) {
  switch (status) {
    case LTBM_OK: return "Ok";
    case LTBM_ERR_UNKNOWN_COMMAND: return "UnknownCommand";
    case LTBM_ERR_INTERNAL: return "Internal";
    default: break;
  }
  if (status >= LTBM_ERR_SYNTAX && status <= LTBM_ERR_INVALID_ARGUMENT)
    return ltbm::error_code_name(static_cast<ltbm::ErrorCode>(status)).data();
  return "Unknown";
}

const char* ltbm_last_error(void) { return last_error.c_str(); }

ltbm_status ltbm_run_load(const char* path, ltbm_run** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ltbm_run{ltbm::load_config(path), {}, {}};
    return LTBM_OK;
  });
}

ltbm_status ltbm_run_parse(const char* text, ltbm_run** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ltbm_run{ltbm::parse_config(text), {}, {}};
    return LTBM_OK;
  });
}

void ltbm_run_free(ltbm_run* run) { delete run; }

ltbm_status ltbm_run_set_seed(ltbm_run* run, uint64_t seed) {
  if (!run) return null_argument("run");
  run->cfg.numerics.seed = seed;
  return LTBM_OK;
}

ltbm_status ltbm_run_set_threads(ltbm_run* run, int threads) {
  if (!run) return null_argument("run");
  if (threads < 1) {
    last_error = "threads must be at least 1";
    return LTBM_ERR_INVALID_ARGUMENT;
  }
  run->cfg.numerics.threads = threads;
  return LTBM_OK;
}

int ltbm_run_dim(const ltbm_run* run) { return run ? run->cfg.st.dim() : 0; }

ltbm_status ltbm_run_command(ltbm_run* run, const char* command, int* exit_status) {
  if (!run) return null_argument("run");
  if (!command) return null_argument("command");
  return guarded([&] {
    std::ostringstream rec, sum;
    ltbm::ErrorCode code{};
    const int status = ltbm::run_command(run->cfg, command, rec, sum, &code);
    run->records = rec.str();
    run->summary = sum.str();
    if (exit_status) *exit_status = status;
    if (status == ltbm::kExitUsage) {
      last_error = std::string("unknown command '") + command + "'";
      return LTBM_ERR_UNKNOWN_COMMAND;
    }
    if (status == ltbm::kExitModuleError) {
      last_error = run->summary;
      return to_status(code);
    }
    return LTBM_OK;
  });
}

const char* ltbm_run_records(const ltbm_run* run) { return run ? run->records.c_str() : ""; }
const char* ltbm_run_summary(const ltbm_run* run) { return run ? run->summary.c_str() : ""; }

ltbm_status ltbm_bakry_emery_ricci(const ltbm_run* run, const double* x, const double* v, double* out) {
  if (!run) return null_argument("run");
  if (!x || !v || !out) return null_argument("x, v or out");
  return guarded([&] {
    const int n = run->cfg.st.dim();
    const ltbm::Vec xv = to_vec(x, n);
    *out = ltbm::bakry_emery_ricci(run->cfg.st, ltbm::as_span(xv), to_vec(v, n));
    return LTBM_OK;
  });
}

ltbm_status ltbm_time_separation(const ltbm_run* run, const double* x, const double* y, double* out,
                                 int* is_minus_infinity) {
  if (!run) return null_argument("run");
  if (!x || !y || !out || !is_minus_infinity) return null_argument("x, y, out or is_minus_infinity");
  return guarded([&] {
    const int n = run->cfg.st.dim();
    const ltbm::SeparationValue s =
        ltbm::time_separation(run->cfg.st, to_vec(x, n), to_vec(y, n), run->cfg.log_options());
    *is_minus_infinity = s.minus_infinity ? 1 : 0;
    *out = s.minus_infinity ? 0.0 : s.value;
    return LTBM_OK;
  });
}

}  // extern "C"
