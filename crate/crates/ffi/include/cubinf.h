#ifndef CUBINF_H
#define CUBINF_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stdint.h>

/**
 * Status code of every fallible call.
 */
typedef enum CubinfStatus {
  CUBINF_STATUS_OK = 0,
  /**
   * Input does not parse or is not a cubic in x0, x1, x2.
   */
  CUBINF_STATUS_PARSE = 1,
  /**
   * A required algebraic extension is outside the supported fields.
   */
  CUBINF_STATUS_UNSUPPORTED_EXTENSION = 3,
  /**
   * Internal inconsistency detected by the classifier.
   */
  CUBINF_STATUS_INCONSISTENT = 4,
  /**
   * A required pointer argument was null.
   */
  CUBINF_STATUS_NULL_ARGUMENT = 10,
  /**
   * Input is not valid UTF-8.
   */
  CUBINF_STATUS_INVALID_UTF8 = 11,
  /**
   * The requested quantity is undefined for this report.
   */
  CUBINF_STATUS_UNDEFINED = 12,
  /**
   * A Rust panic was caught.
   */
  CUBINF_STATUS_PANIC = 13,
} CubinfStatus;

/**
 * Opaque classification report.
 */
typedef struct CubinfReport CubinfReport;

/**
 * Classifies one polynomial written in x0, x1, x2.
 *
 * On success `*out` receives a new report and `CubinfStatus::Ok` is returned.
 * On failure `*out` is set to null and, when `err` is not null, `*err`
 * receives a message to be released with [`cubinf_string_free`].
 *
 * # Safety
 *
 * `input` must be a valid NUL-terminated string. `out` must be a valid
 * pointer to writable storage for one pointer. `err` must be null or a valid
 * pointer to writable storage for one pointer.
 */
enum CubinfStatus cubinf_classify(const char *input,
                                  bool verify,
                                  uint64_t seed,
                                  struct CubinfReport **out,
                                  char **err);

/**
 * Releases a report. Null is accepted and ignored.
 *
 * # Safety
 *
 * `report` must be null or a pointer returned by [`cubinf_classify`] that has
 * not been released yet.
 */
void cubinf_report_free(struct CubinfReport *report);

/**
 * Releases a string returned by this library. Null is accepted and ignored.
 *
 * # Safety
 *
 * `s` must be null or a string returned by this library that has not been
 * released yet.
 */
void cubinf_string_free(char *s);

/**
 * Report as JSON, or null when `report` is null.
 *
 * # Safety
 *
 * `report` must be null or a live report handle.
 */
char *cubinf_report_json(const struct CubinfReport *report);

/**
 * Human readable summary, or null when `report` is null.
 *
 * # Safety
 *
 * `report` must be null or a live report handle.
 */
char *cubinf_report_text(const struct CubinfReport *report);

/**
 * Exit code the command-line tool would use: 0, 2 outside the B class, 4 failed verification.
 * Returns -1 when `report` is null.
 *
 * # Safety
 *
 * `report` must be null or a live report handle.
 */
int32_t cubinf_report_exit_code(const struct CubinfReport *report);

/**
 * True when the polynomial lies outside the B class.
 *
 * # Safety
 *
 * `report` must be null or a live report handle.
 */
bool cubinf_report_is_not_b(const struct CubinfReport *report);

/**
 * Total jump `lambda` of the verdict.
 *
 * # Safety
 *
 * `report` must be null or a live report handle; `out` must be null or valid for one write.
 */
enum CubinfStatus cubinf_report_lambda(const struct CubinfReport *report, uint32_t *out);

/**
 * Affine Milnor number `mu`; `Undefined` when the affine critical set is not finite.
 *
 * # Safety
 *
 * `report` must be null or a live report handle; `out` must be null or valid for one write.
 */
enum CubinfStatus cubinf_report_mu(const struct CubinfReport *report, uint32_t *out);

/**
 * Second Betti number of the generic fiber; `Undefined` outside the isolated case.
 *
 * # Safety
 *
 * `report` must be null or a live report handle; `out` must be null or valid for one write.
 */
enum CubinfStatus cubinf_report_b2(const struct CubinfReport *report, uint32_t *out);

#endif  /* CUBINF_H */
