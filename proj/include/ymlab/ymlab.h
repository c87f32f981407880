#ifndef YMLAB_H
#define YMLAB_H

/* C interface to the ymlab library. Objects are opaque handles; every
 * function returns a status code, and ymlab_last_error() holds the message
 * of the most recent failure on the calling thread. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define YMLAB_API __attribute__((visibility("default")))
#else
#define YMLAB_API
#endif

typedef enum ymlab_status {
  YMLAB_OK = 0,
  YMLAB_CHECK_FAILED = 1,
  YMLAB_CONFIG_ERROR = 2,
  YMLAB_DIVERGENCE = 3,
  YMLAB_INVALID_ARGUMENT = 4,
  YMLAB_IO_ERROR = 5,
  YMLAB_NUMERIC_ERROR = 6,
  YMLAB_INTERNAL = 7
} ymlab_status;

typedef enum ymlab_group { YMLAB_U1 = 0, YMLAB_SU2 = 1 } ymlab_group;

typedef struct ymlab_config ymlab_config;
typedef struct ymlab_field ymlab_field;

typedef struct ymlab_run_options {
  const char* out_dir;     /* required */
  const char* scenario;    /* NULL keeps the config's scenario */
  int has_seed;
  uint64_t seed;
  int threads;             /* 0 keeps the default team size */
  int snapshot_every;      /* < 0 keeps the config value */
} ymlab_run_options;

YMLAB_API const char* ymlab_version(void);
YMLAB_API const char* ymlab_last_error(void);
/* Time-node index of the last divergence error, or -1. */
YMLAB_API long ymlab_last_error_node(void);
YMLAB_API const char* ymlab_status_string(ymlab_status s);

YMLAB_API ymlab_status ymlab_config_load(const char* path, ymlab_config** out);
YMLAB_API ymlab_status ymlab_config_parse(const char* text, const char* source,
                                          ymlab_config** out);
YMLAB_API ymlab_status ymlab_config_set(ymlab_config* cfg, const char* key, const char* value);
/* Writes the 16-hex-digit config hash plus terminator into buf (>= 17 bytes). */
YMLAB_API ymlab_status ymlab_config_hash(const ymlab_config* cfg, char* buf, size_t size);
YMLAB_API void ymlab_config_free(ymlab_config* cfg);

/* Runs one scenario. YMLAB_CHECK_FAILED means artifacts were written but an
 * enabled check did not pass. */
YMLAB_API ymlab_status ymlab_run(const ymlab_config* cfg, const ymlab_run_options* opt);

YMLAB_API ymlab_status ymlab_field_create(int n, double L, ymlab_group group, int degree,
                                          ymlab_field** out);
YMLAB_API ymlab_status ymlab_field_load(const char* path, ymlab_field** out);
YMLAB_API ymlab_status ymlab_field_save(const ymlab_field* f, const char* path);
/* Raw coefficient storage, channel-major; see the snapshot documentation. */
YMLAB_API ymlab_status ymlab_field_data(ymlab_field* f, double** data, size_t* size);
YMLAB_API ymlab_status ymlab_field_lp_norm(const ymlab_field* f, double p, double* out);
YMLAB_API ymlab_status ymlab_field_curvature(const ymlab_field* A, ymlab_field** out);
YMLAB_API void ymlab_field_free(ymlab_field* f);

#ifdef __cplusplus
}
#endif

#endif
