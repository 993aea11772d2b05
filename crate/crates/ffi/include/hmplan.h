#ifndef HMPLAN_H
#define HMPLAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  HM_STATUS_OK = 0,
  HM_STATUS_UNSOLVABLE = 1,
  HM_STATUS_NO_SOLUTION_WITHIN = 2,
  HM_STATUS_RESOURCE_LIMIT = 3,
  HM_STATUS_PARSE_ERROR = 4,
  HM_STATUS_INVALID_ARGUMENT = 5,
  HM_STATUS_CONFIG_ERROR = 6,
  HM_STATUS_NOT_SOLVED = 7,
  HM_STATUS_INTERNAL = 8,
} HmStatus;

typedef enum {
  HM_PIPELINE_TP4 = 0,
  HM_PIPELINE_HSPA = 1,
} HmPipeline;

typedef enum {
  /**
   * Use the mode implied by the domain.
   */
  HM_MODE_DEFAULT = 0,
  HM_MODE_SEQUENTIAL = 1,
  HM_MODE_PARALLEL = 2,
  HM_MODE_TEMPORAL = 3,
} HmMode;

typedef enum {
  HM_STOP_FIXED = 0,
  HM_STOP_NO_AND_NODE = 1,
  HM_STOP_CONVERGED = 2,
} HmStop;

/**
 * Opaque planner handle.
 */
typedef struct HmPlanner HmPlanner;

typedef struct {
  /**
   * An `HmPipeline` value.
   */
  uint32_t pipeline;
  /**
   * An `HmMode` value.
   */
  uint32_t mode;
  /**
   * 1 or 2.
   */
  uint32_t base_m;
  /**
   * An `HmStop` value.
   */
  uint32_t stop;
  /**
   * The cap for `HmStop::Fixed`.
   */
  uint32_t stop_m;
  uint64_t tt_capacity;
  uint64_t solved_capacity;
  bool round_durations;
  bool right_shift;
  bool validate;
  /**
   * 0 means unlimited.
   */
  uint64_t max_expansions;
} HmConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

HmConfig hm_config_default(void);

/**
 * Parses and grounds a domain/problem pair. On success `*out` receives a
 * handle to release with [`hm_planner_free`]. On a parse error, `*out` is
 * still set when possible so that the message can be read.
 *
 * # Safety
 * `domain` and `problem` must be valid NUL-terminated strings and `out` a
 * valid pointer.
 */
HmStatus hm_planner_new(const char *domain, const char *problem, HmPlanner **out);

/**
 * # Safety
 * `planner` must be null or a handle from [`hm_planner_new`] not yet freed.
 */
void hm_planner_free(HmPlanner *planner);

/**
 * Runs the configured pipeline; `config` may be null for the defaults.
 *
 * # Safety
 * `planner` must be a live handle; `config` null or valid.
 */
HmStatus hm_planner_solve(HmPlanner *planner, const HmConfig *config);

/**
 * The optimal metric as a fraction `num / den`.
 *
 * # Safety
 * `planner` must be a live handle; `num` and `den` valid pointers.
 */
HmStatus hm_planner_metric(const HmPlanner *planner, int64_t *num, int64_t *den);

/**
 * Number of steps in the plan, or 0 when there is none.
 *
 * # Safety
 * `planner` must be null or a live handle.
 */
size_t hm_planner_step_count(const HmPlanner *planner);

/**
 * The plan in the CLI's text format. Release with [`hm_string_free`].
 *
 * # Safety
 * `planner` must be a live handle and `out` a valid pointer.
 */
HmStatus hm_planner_plan_text(const HmPlanner *planner, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void hm_string_free(char *s);

/**
 * Message for the last failure on this handle; empty when none. Valid
 * until the next call on the same handle.
 *
 * # Safety
 * `planner` must be null or a live handle.
 */
const char *hm_planner_last_error(const HmPlanner *planner);

/**
 * Static description of a status code.
 */
const char *hm_status_str(HmStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HMPLAN_H */
