#ifndef RATIOLAB_H
#define RATIOLAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum RatiolabStatus {
  RATIOLAB_STATUS_OK = 0,
  RATIOLAB_STATUS_NULL_POINTER = 1,
  RATIOLAB_STATUS_INVALID_ARGUMENT = 2,
  RATIOLAB_STATUS_INVALID_INSTANCE = 3,
  RATIOLAB_STATUS_GUARD_EXCEEDED = 4,
  RATIOLAB_STATUS_UNDEFINED_RATIO = 5,
  RATIOLAB_STATUS_NO_CONSISTENT_PLANT = 6,
  RATIOLAB_STATUS_PANIC = 99,
} RatiolabStatus;

/**
 * Which function of an instance to evaluate.
 */
typedef enum RatiolabFunction {
  /**
   * Numerator `f`.
   */
  RATIOLAB_FUNCTION_F = 0,
  /**
   * Unplanted denominator (increasing family only).
   */
  RATIOLAB_FUNCTION_G = 1,
  /**
   * Planted denominator `g_R`.
   */
  RATIOLAB_FUNCTION_G_PLANTED = 2,
} RatiolabFunction;

/**
 * Query-budgeted algorithm for [`ratiolab_game`].
 */
typedef enum RatiolabAlgorithm {
  RATIOLAB_ALGORITHM_LOCAL_SEARCH = 0,
  RATIOLAB_ALGORITHM_RANDOM_SEARCH = 1,
} RatiolabAlgorithm;

/**
 * Opaque instance handle.
 */
typedef struct RatiolabInstance RatiolabInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ratiolab_version(void);

/**
 * Last error message on this thread, or NULL. Valid until the next call
 * into the library from the same thread.
 */
const char *ratiolab_last_error(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ratiolab_string_free(char *s);

/**
 * Builds an instance from a JSON descriptor.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum RatiolabStatus ratiolab_instance_from_json(const char *json, struct RatiolabInstance **out);

/**
 * Releases an instance. NULL is ignored.
 *
 * # Safety
 * `inst` must come from [`ratiolab_instance_from_json`] and not have been freed.
 */
void ratiolab_instance_free(struct RatiolabInstance *inst);

/**
 * Ground-set size of an instance.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum RatiolabStatus ratiolab_instance_n(const struct RatiolabInstance *inst, size_t *out);

/**
 * Evaluates one function at the set given by `indices[0..len]`; writes a
 * `"p/q"` string to `out`.
 *
 * # Safety
 * `inst` must be live, `indices` valid for `len` reads (may be NULL when
 * `len` is 0), `out` writable.
 */
enum RatiolabStatus ratiolab_eval(const struct RatiolabInstance *inst,
                                  enum RatiolabFunction which,
                                  const size_t *indices,
                                  size_t len,
                                  char **out);

/**
 * `f(S)/g(S)` with the planted denominator when the instance has a plant.
 *
 * # Safety
 * As for [`ratiolab_eval`].
 */
enum RatiolabStatus ratiolab_ratio(const struct RatiolabInstance *inst,
                                   const size_t *indices,
                                   size_t len,
                                   char **out);

/**
 * Exhaustive structural check of one function: supermodularity,
 * monotonicity in the family's direction and nonnegativity. Writes the
 * total violation count.
 *
 * # Safety
 * `inst` must be live; `violations` writable.
 */
enum RatiolabStatus ratiolab_verify(const struct RatiolabInstance *inst,
                                    enum RatiolabFunction which,
                                    size_t *violations);

/**
 * Exhaustive minimum of `f/g`; writes a JSON object with `argset`,
 * `value`, `queries_used`, `method` and `sense`.
 *
 * # Safety
 * `inst` must be live; `out` writable.
 */
enum RatiolabStatus ratiolab_solve_brute(const struct RatiolabInstance *inst, char **out);

/**
 * Runs the planted-instance game on an unplanted instance; writes a JSON
 * object `{"summary": .., "trials": [..]}`.
 *
 * # Safety
 * `inst` must be live; `out` writable.
 */
enum RatiolabStatus ratiolab_game(const struct RatiolabInstance *inst,
                                  enum RatiolabAlgorithm algorithm,
                                  uint64_t budget,
                                  uint64_t trials,
                                  uint64_t seed,
                                  char **out);

/**
 * Exact probability that a fixed `s`-set separates `f` from `g_R` for a
 * uniform `α`-subset `R` of `n` elements; writes `"p/q"`.
 *
 * # Safety
 * `out` must be writable.
 */
enum RatiolabStatus ratiolab_distinguish_probability(size_t n,
                                                     size_t alpha,
                                                     size_t beta,
                                                     size_t s,
                                                     char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RATIOLAB_H */
