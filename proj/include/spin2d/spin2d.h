#ifndef SPIN2D_H
#define SPIN2D_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define S2D_API __attribute__((visibility("default")))
#else
#define S2D_API
#endif

/* Status codes. The first four double as CLI exit codes. */
typedef enum s2d_status {
  S2D_OK = 0,
  S2D_TASK_FAILED = 1,
  S2D_CONFIG_ERROR = 2,     /* parse error, bad expression, bad parameter */
  S2D_SINGULAR = 3,         /* degenerate frame, branch point, step failure */
  S2D_INVALID_ARGUMENT = 4, /* null handle, index out of range */
  S2D_IO_ERROR = 5
} s2d_status;

typedef struct s2d_config s2d_config;
typedef struct s2d_report s2d_report;

typedef struct s2d_task_info {
  const char* name;   /* owned by the report */
  const char* status; /* "pass", "fail" or "error" */
  double residual;
  double tolerance;
  int has_location;
  double x, y;
  int exit_code;
  const char* error; /* empty string when none */
} s2d_task_info;

/* Message of the last failing call on this thread; never NULL. */
S2D_API const char* s2d_last_error(void);
S2D_API const char* s2d_version(void);

S2D_API s2d_status s2d_config_load(const char* path, s2d_config** out);
S2D_API s2d_status s2d_config_parse(const char* text, size_t len, s2d_config** out);
S2D_API void s2d_config_free(s2d_config* cfg);
S2D_API s2d_status s2d_config_set_seed(s2d_config* cfg, uint64_t seed);

/* Runs every task in the config. A report is produced even when tasks fail;
   the return value is S2D_OK when the run completed. */
S2D_API s2d_status s2d_verify(const s2d_config* cfg, int grid_refine, s2d_report** out);
S2D_API size_t s2d_report_task_count(const s2d_report* rep);
S2D_API s2d_status s2d_report_task(const s2d_report* rep, size_t index, s2d_task_info* out);
S2D_API int s2d_report_passed(const s2d_report* rep);
S2D_API int s2d_report_exit_code(const s2d_report* rep);
/* Owned by the report, valid until s2d_report_free. */
S2D_API const char* s2d_report_json(const s2d_report* rep);
S2D_API const char* s2d_report_table(const s2d_report* rep);
S2D_API void s2d_report_free(s2d_report* rep);

/* Integrates the separated solution described by the config and writes the
   y-table as CSV. rows may be NULL. */
S2D_API s2d_status s2d_separate_csv(const s2d_config* cfg, const char* path, size_t* rows);

#ifdef __cplusplus
}
#endif

#endif
