#include "spin2d/spin2d.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "spin2d/error.hpp"
#include "spin2d/verify.hpp"

struct s2d_config {
  spin2d::VerificationConfig cfg;
};

struct s2d_report {
  spin2d::Report report;
  std::string json;
  std::string table;
};

namespace {

thread_local std::string g_last_error;

s2d_status fail(s2d_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Maps library exceptions to status codes; call inside a catch block.
s2d_status translate() {
  try {
    throw;
  } catch (const spin2d::ConfigError& e) {
    return fail(S2D_CONFIG_ERROR, e.what());
  } catch (const spin2d::ParseError& e) {
    return fail(S2D_CONFIG_ERROR, e.what());
  } catch (const spin2d::ConstraintError& e) {
    return fail(S2D_CONFIG_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(S2D_SINGULAR, "out of memory");
  } catch (const std::exception& e) {
    return fail(S2D_SINGULAR, e.what());
  } catch (...) {
    return fail(S2D_SINGULAR, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* s2d_last_error(void) { return g_last_error.c_str(); }

const char* s2d_version(void) { return "0.1.0"; }

s2d_status s2d_config_load(const char* path, s2d_config** out) {
  if (!path || !out) return fail(S2D_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(S2D_IO_ERROR, std::string("cannot open config '") + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s2d_config_parse(text.data(), text.size(), out);
}

s2d_status s2d_config_parse(const char* text, size_t len, s2d_config** out) {
  if (!text || !out) return fail(S2D_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  try {
    *out = new s2d_config{spin2d::parse_config(std::string_view(text, len))};
    return S2D_OK;
  } catch (...) {
    return translate();
  }
}

void s2d_config_free(s2d_config* cfg) { delete cfg; }

s2d_status s2d_config_set_seed(s2d_config* cfg, uint64_t seed) {
  if (!cfg) return fail(S2D_INVALID_ARGUMENT, "null config");
  cfg->cfg.seed = seed;
  return S2D_OK;
}

s2d_status s2d_verify(const s2d_config* cfg, int grid_refine, s2d_report** out) {
  if (!cfg || !out) return fail(S2D_INVALID_ARGUMENT, "null argument");
  if (grid_refine < 1) return fail(S2D_INVALID_ARGUMENT, "grid refinement must be >= 1");
  *out = nullptr;
  try {
    auto* rep = new s2d_report{spin2d::run_verification(cfg->cfg, grid_refine), {}, {}};
    rep->json = rep->report.json_lines();
    rep->table = rep->report.table();
    *out = rep;
    return S2D_OK;
  } catch (...) {
    return translate();
  }
}

size_t s2d_report_task_count(const s2d_report* rep) { return rep ? rep->report.tasks.size() : 0; }

s2d_status s2d_report_task(const s2d_report* rep, size_t index, s2d_task_info* out) {
  if (!rep || !out) return fail(S2D_INVALID_ARGUMENT, "null argument");
  if (index >= rep->report.tasks.size()) return fail(S2D_INVALID_ARGUMENT, "task index out of range");
  const spin2d::TaskResult& t = rep->report.tasks[index];
  out->name = t.name.c_str();
  out->status = spin2d::status_name(t.status);
  out->residual = t.residual;
  out->tolerance = t.tolerance;
  out->has_location = t.where ? 1 : 0;
  out->x = t.where ? t.where->first : 0.0;
  out->y = t.where ? t.where->second : 0.0;
  out->exit_code = t.exit_code;
  out->error = t.error.c_str();
  return S2D_OK;
}

int s2d_report_passed(const s2d_report* rep) { return rep && rep->report.passed() ? 1 : 0; }

int s2d_report_exit_code(const s2d_report* rep) { return rep ? rep->report.exit_code() : S2D_INVALID_ARGUMENT; }

const char* s2d_report_json(const s2d_report* rep) { return rep ? rep->json.c_str() : ""; }

const char* s2d_report_table(const s2d_report* rep) { return rep ? rep->table.c_str() : ""; }

void s2d_report_free(s2d_report* rep) { delete rep; }

s2d_status s2d_separate_csv(const s2d_config* cfg, const char* path, size_t* rows) {
  if (!cfg || !path) return fail(S2D_INVALID_ARGUMENT, "null argument");
  try {
    if (cfg->cfg.geometry != spin2d::GeometryKind::Liouville)
      return fail(S2D_CONFIG_ERROR, "separate needs a geometry.liouville metric");
    spin2d::check_region(cfg->cfg.liouville, cfg->cfg.region, cfg->cfg.grid);
    const spin2d::SeparatedSolution s =
        spin2d::separate_solve(cfg->cfg.liouville, spin2d::separation_params(cfg->cfg));
    std::ofstream f(path, std::ios::binary);
    if (!f) return fail(S2D_IO_ERROR, std::string("cannot write '") + path + "'");
    f << spin2d::solution_csv(s);
    if (!f) return fail(S2D_IO_ERROR, std::string("write failed for '") + path + "'");
    if (rows) *rows = s.y.size();
    return S2D_OK;
  } catch (...) {
    return translate();
  }
}

}  // extern "C"
