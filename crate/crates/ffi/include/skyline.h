#ifndef SKYLINE_H
#define SKYLINE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SkyStatus {
  SKY_STATUS_OK = 0,
  SKY_STATUS_NULL_POINTER = 1,
  SKY_STATUS_INVALID_UTF8 = 2,
  SKY_STATUS_VALIDATION = 3,
  SKY_STATUS_CANNOT_CLIMB = 4,
  SKY_STATUS_MODEL = 5,
  SKY_STATUS_PANIC = 6,
} SkyStatus;

typedef enum SkyBound {
  SKY_BOUND_PHYSICS = 0,
  SKY_BOUND_COMPUTE = 1,
  SKY_BOUND_SENSOR = 2,
  SKY_BOUND_CONTROL = 3,
} SkyBound;

typedef enum SkyGapDirection {
  SKY_GAP_DIRECTION_UNDER_PROVISIONED = 0,
  SKY_GAP_DIRECTION_OVER_PROVISIONED = 1,
  SKY_GAP_DIRECTION_BALANCED = 2,
} SkyGapDirection;

/**
 * Result of an analysis.
 */
typedef struct SkyAnalysis SkyAnalysis;

/**
 * Resolved UAV configuration.
 */
typedef struct SkyConfig SkyConfig;

/**
 * Catalog of presets.
 */
typedef struct SkyStore SkyStore;

typedef struct SkyKnee {
  double knee_throughput_hz;
  double knee_velocity_mps;
  double asymptote_velocity_mps;
} SkyKnee;

typedef struct SkySummary {
  double f_action_hz;
  double v_safe_mps;
  struct SkyKnee knee;
  enum SkyBound bound;
  double ceiling_velocity_mps;
  double gap_ratio;
  enum SkyGapDirection gap_direction;
  double a_max_mps2;
  double thrust_to_weight;
} SkySummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sky_version(void);

/**
 * Message for the last failed call on this thread, or NULL. Free with `sky_string_free`.
 */
char *sky_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void sky_string_free(char *s);

/**
 * # Safety
 * `out` must be a valid pointer to writable memory.
 */
enum SkyStatus sky_safe_velocity(double a_max_mps2,
                                 double sense_range_m,
                                 double action_period_s,
                                 double *out);

/**
 * # Safety
 * `out` must be a valid pointer to writable memory.
 */
enum SkyStatus sky_action_period_for_velocity(double a_max_mps2,
                                              double sense_range_m,
                                              double velocity_mps,
                                              double *out);

/**
 * # Safety
 * `out` must be a valid pointer to writable memory.
 */
enum SkyStatus sky_calibrate_a_max(double velocity_mps,
                                   double action_period_s,
                                   double sense_range_m,
                                   double *out);

/**
 * # Safety
 * `out` must be a valid pointer to writable memory.
 */
enum SkyStatus sky_knee_point(double a_max_mps2,
                              double sense_range_m,
                              double threshold,
                              struct SkyKnee *out);

/**
 * Builtin catalog. Never NULL.
 */
struct SkyStore *sky_store_builtin(void);

/**
 * Merges a TOML or JSON preset document over `base` into a new store.
 *
 * # Safety
 * `base` must be a live store handle, `document` a NUL-terminated string and
 * `out` a valid pointer.
 */
enum SkyStatus sky_store_with_overlay(const struct SkyStore *base,
                                      const char *document,
                                      struct SkyStore **out);

/**
 * # Safety
 * `store` must be NULL or a handle from this library, not yet freed.
 */
void sky_store_free(struct SkyStore *store);

/**
 * Resolves a TOML or JSON configuration document.
 *
 * # Safety
 * `store` must be a live store handle, `document` a NUL-terminated string and
 * `out` a valid pointer.
 */
enum SkyStatus sky_config_load(const struct SkyStore *store,
                               const char *document,
                               struct SkyConfig **out);

/**
 * # Safety
 * `config` must be NULL or a handle from this library, not yet freed.
 */
void sky_config_free(struct SkyConfig *config);

/**
 * # Safety
 * `config` must be a live configuration handle and `out` a valid pointer.
 */
enum SkyStatus sky_analyze(const struct SkyConfig *config, struct SkyAnalysis **out);

/**
 * # Safety
 * `analysis` must be a live analysis handle and `out` a valid pointer.
 */
enum SkyStatus sky_analysis_summary(const struct SkyAnalysis *analysis, struct SkySummary *out);

/**
 * Full analysis as JSON, or NULL on a NULL handle. Free with `sky_string_free`.
 *
 * # Safety
 * `analysis` must be NULL or a live analysis handle.
 */
char *sky_analysis_to_json(const struct SkyAnalysis *analysis);

/**
 * # Safety
 * `analysis` must be NULL or a handle from this library, not yet freed.
 */
void sky_analysis_free(struct SkyAnalysis *analysis);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SKYLINE_H */
