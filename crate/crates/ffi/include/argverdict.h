#ifndef ARGVERDICT_H
#define ARGVERDICT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ArgvStatus {
  ARGV_STATUS_OK = 0,
  ARGV_STATUS_NULL_POINTER = 1,
  ARGV_STATUS_INVALID_UTF8 = 2,
  ARGV_STATUS_INVALID_INPUT = 3,
  ARGV_STATUS_RANGE = 4,
  ARGV_STATUS_INVALID_TARGET = 5,
  ARGV_STATUS_UNSUPPORTED_STRUCTURE = 6,
  ARGV_STATUS_INVALID_QBAF = 7,
  ARGV_STATUS_PARSE = 8,
  ARGV_STATUS_NOT_FOUND = 9,
  ARGV_STATUS_INTERNAL = 10,
} ArgvStatus;

typedef enum ArgvRelation {
  ARGV_RELATION_SUPPORT = 0,
  ARGV_RELATION_ATTACK = 1,
} ArgvRelation;

typedef enum ArgvLabel {
  ARGV_LABEL_TRUE = 0,
  ARGV_LABEL_FALSE = 1,
  ARGV_LABEL_UNCERTAIN = 2,
} ArgvLabel;

// A claim-centred framework.
typedef struct ArgvQbaf ArgvQbaf;

// Strengths, verdict and gradient from one evaluation.
typedef struct ArgvReport ArgvReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a framework holding only the claim (id `"c"`).
//
// # Safety
// `claim` must be a valid NUL-terminated string; `out` must be writable.
enum ArgvStatus argv_qbaf_new(const char *claim, struct ArgvQbaf **out);

// Adds a supporter (`s1`, `s2`, ...) or attacker (`t1`, `t2`, ...) of the
// claim and writes its id, which the caller frees.
//
// # Safety
// `q` must come from this library; `text` must be a valid string; `out_id`
// may be null.
enum ArgvStatus argv_qbaf_add_argument(struct ArgvQbaf *q,
                                       enum ArgvRelation relation,
                                       const char *text,
                                       char **out_id);

// Sets the base score of a non-claim argument.
//
// # Safety
// `q` must come from this library; `id` must be a valid string.
enum ArgvStatus argv_qbaf_set_base_score(struct ArgvQbaf *q, const char *id, double score);

// Parses a framework from its JSON form.
//
// # Safety
// `json` must be a valid string; `out` must be writable.
enum ArgvStatus argv_qbaf_from_json(const char *json, struct ArgvQbaf **out);

// Serialises a framework to JSON. Free the result with
// [`argv_string_free`].
//
// # Safety
// `q` must come from this library; `out` must be writable.
enum ArgvStatus argv_qbaf_to_json(const struct ArgvQbaf *q, char **out);

// # Safety
// `q` must come from this library and not be used afterwards. Null is
// ignored.
void argv_qbaf_free(struct ArgvQbaf *q);

// Evaluates the framework under DF-QuAD and thresholds the claim.
//
// # Safety
// `q` must come from this library; `out` must be writable.
enum ArgvStatus argv_evaluate(const struct ArgvQbaf *q, struct ArgvReport **out);

// Claim strength, or NaN for a null report.
//
// # Safety
// `r` must come from this library or be null.
double argv_report_claim_strength(const struct ArgvReport *r);

// # Safety
// `r` must come from this library; `out` must be writable.
enum ArgvStatus argv_report_verdict(const struct ArgvReport *r, enum ArgvLabel *out);

// Final strength of argument `id`.
//
// # Safety
// `r` must come from this library; `id` must be a valid string; `out` must
// be writable.
enum ArgvStatus argv_report_strength(const struct ArgvReport *r, const char *id, double *out);

// Derivative of the claim strength with respect to the base score of leaf
// `id`. Available for depth-1 frameworks only.
//
// # Safety
// As for [`argv_report_strength`].
enum ArgvStatus argv_report_gradient(const struct ArgvReport *r, const char *id, double *out);

// # Safety
// `r` must come from this library; `out` must be writable.
enum ArgvStatus argv_report_to_json(const struct ArgvReport *r, char **out);

// # Safety
// `r` must come from this library and not be used afterwards. Null is
// ignored.
void argv_report_free(struct ArgvReport *r);

// The fixed threshold map from strength to verdict.
//
// # Safety
// `out` must be writable.
enum ArgvStatus argv_threshold(double strength, enum ArgvLabel *out);

// Argumentation reward for `strength` given the gold label and plateau
// width `delta` in `[0, 1/3]`.
//
// # Safety
// `out` must be writable.
enum ArgvStatus argv_reward(enum ArgvLabel gold, double strength, double delta, double *out);

// Group-normalised advantages of `n` rewards, written to `out` (room for
// `n` values).
//
// # Safety
// `rewards` must point to `n` readable values and `out` to `n` writable
// ones.
enum ArgvStatus argv_group_advantages(const double *rewards, size_t n, double *out);

// +100 when `parsed` is true and `predicted` equals `gold`, else −100.
double argv_direct_reward(enum ArgvLabel gold, enum ArgvLabel predicted, bool parsed);

// Copy of the last error message on this thread, or null. Free with
// [`argv_string_free`].
char *argv_last_error_message(void);

// # Safety
// `s` must be a string returned by this library, or null.
void argv_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARGVERDICT_H */
