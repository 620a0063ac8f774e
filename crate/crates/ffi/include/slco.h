#ifndef SLCO_H
#define SLCO_H

/* Generated by cbindgen from the slco-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  SLCO_STATUS_OK = 0,
  SLCO_STATUS_NULL_ARGUMENT = 1,
  SLCO_STATUS_INVALID_UTF8 = 2,
  SLCO_STATUS_PARSE_ERROR = 3,
  SLCO_STATUS_INVALID_MODEL = 4,
  SLCO_STATUS_LIMIT_EXCEEDED = 5,
  SLCO_STATUS_EVALUATION_ERROR = 6,
  SLCO_STATUS_FORMAT_ERROR = 7,
  SLCO_STATUS_INVALID_ARGUMENT = 8,
  SLCO_STATUS_PANIC = 9,
} SlcoStatus;

typedef enum {
  SLCO_RELATION_STRONG = 0,
  SLCO_RELATION_BRANCHING = 1,
} SlcoRelation;

/*
 A labeled transition system.
 */
typedef struct SlcoLts SlcoLts;

/*
 A parsed and validated SLCO model.
 */
typedef struct SlcoModel SlcoModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library and format version, as a static NUL-terminated string.
 */
const char *slco_version(void);

/*
 Message describing the last failure on this thread, or an empty string.
 Valid until the next call into this library on the same thread.
 */
const char *slco_last_error(void);

/*
 Releases a string returned by this library. Null is ignored.
 */
void slco_string_free(char *s);

/*
 Parses and validates a model.
 */
SlcoStatus slco_model_parse(const char *source, SlcoModel **out);

/*
 Checks a model and writes every diagnostic (errors and warnings, one per
 line) to `diagnostics`, which may be null. Returns `SLCO_STATUS_OK` iff
 there are no errors.
 */
SlcoStatus slco_model_validate(const char *source, char **diagnostics);

void slco_model_free(SlcoModel *model);

/*
 Generates the state space of `model` as an LTS. A `max_configurations`
 of 0 means no limit. `buffer_capacity` must be at least 1.
 */
SlcoStatus slco_model_explore(const SlcoModel *model,
                              size_t buffer_capacity,
                              size_t max_configurations,
                              SlcoLts **out);

/*
 Parses the `.lts` text format.
 */
SlcoStatus slco_lts_parse(const char *source, SlcoLts **out);

void slco_lts_free(SlcoLts *lts);

/*
 Number of states, or 0 for a null handle.
 */
size_t slco_lts_num_states(const SlcoLts *lts);

/*
 Number of transitions, or 0 for a null handle.
 */
size_t slco_lts_num_transitions(const SlcoLts *lts);

/*
 Renders `lts` in the `.lts` text format.
 */
SlcoStatus slco_lts_to_text(const SlcoLts *lts, char **out);

/*
 Renders `lts` as a Graphviz digraph with the default styling.
 */
SlcoStatus slco_lts_to_dot(const SlcoLts *lts, char **out);

/*
 Renders `lts` in the Aldebaran format. Final states are not exported.
 */
SlcoStatus slco_lts_to_aut(const SlcoLts *lts, char **out);

/*
 Makes labels internal. With `keep` non-zero, every label not in `labels`
 is hidden; otherwise exactly the listed labels are.
 */
SlcoStatus slco_lts_hide(const SlcoLts *lts,
                         bool keep,
                         const char *const *labels,
                         size_t num_labels,
                         SlcoLts **out);

/*
 Minimizes `lts` modulo `relation`.
 */
SlcoStatus slco_lts_reduce(const SlcoLts *lts, SlcoRelation relation, SlcoLts **out);

/*
 Decides whether the initial states of `a` and `b` are related.
 */
SlcoStatus slco_lts_equivalent(const SlcoLts *a,
                               const SlcoLts *b,
                               SlcoRelation relation,
                               bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SLCO_H */
