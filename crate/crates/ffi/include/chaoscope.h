#ifndef CHAOSCOPE_H
#define CHAOSCOPE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum ChaoscopeStatus {
  CHAOSCOPE_STATUS_OK = 0,
  CHAOSCOPE_STATUS_NULL_ARGUMENT = 1,
  CHAOSCOPE_STATUS_INVALID_UTF8 = 2,
  CHAOSCOPE_STATUS_PARSE = 3,
  CHAOSCOPE_STATUS_DOMAIN = 4,
  CHAOSCOPE_STATUS_BUDGET = 5,
  CHAOSCOPE_STATUS_UNKNOWN_MAP = 6,
  CHAOSCOPE_STATUS_INVALID_MAP = 7,
  CHAOSCOPE_STATUS_BAD_PARAM = 8,
  CHAOSCOPE_STATUS_NOT_FOUND = 9,
  CHAOSCOPE_STATUS_FAILED = 10,
  CHAOSCOPE_STATUS_PANIC = 11,
} ChaoscopeStatus;

/**
 * Opaque handle to an exact piecewise-linear self-map.
 */
typedef struct ChaoscopeMap ChaoscopeMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a builtin map: `"tent"`, `"remark1"` or `"stefan:<i>"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ChaoscopeStatus chaoscope_map_builtin(const char *name, struct ChaoscopeMap **out);

/**
 * Parses a map from its JSON node list.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ChaoscopeStatus chaoscope_map_from_json(const char *json, struct ChaoscopeMap **out);

/**
 * Releases a map handle. Null is ignored.
 *
 * # Safety
 * `map` must come from this library and not be used afterwards.
 */
void chaoscope_map_free(struct ChaoscopeMap *map);

/**
 * Writes the map's JSON form to `*out`.
 *
 * # Safety
 * `map` must be a live handle and `out` a valid pointer.
 */
enum ChaoscopeStatus chaoscope_map_to_json(const struct ChaoscopeMap *map, char **out);

/**
 * Evaluates the map exactly at a rational `x` given as `"p/q"`.
 *
 * # Safety
 * `map` must be a live handle, `x` a NUL-terminated string, `out` valid.
 */
enum ChaoscopeStatus chaoscope_map_eval(const struct ChaoscopeMap *map, const char *x, char **out);

/**
 * The `n`-th iterate of the map as a new handle.
 *
 * # Safety
 * `map` must be a live handle and `out` a valid pointer.
 */
enum ChaoscopeStatus chaoscope_map_power(const struct ChaoscopeMap *map,
                                         uintptr_t n,
                                         struct ChaoscopeMap **out);

/**
 * The two-interval square root of a map on `[0, 1]`, acting on `[0, 3]`.
 *
 * # Safety
 * `map` must be a live handle and `out` a valid pointer.
 */
enum ChaoscopeStatus chaoscope_map_square_root(const struct ChaoscopeMap *map,
                                               struct ChaoscopeMap **out);

/**
 * JSON array of the exact orbit `x, f(x), ..., f^n(x)`.
 *
 * # Safety
 * `map` must be a live handle, `x` a NUL-terminated string, `out` valid.
 */
enum ChaoscopeStatus chaoscope_orbit_json(const struct ChaoscopeMap *map,
                                          const char *x,
                                          uintptr_t n,
                                          char **out);

/**
 * JSON array of the isolated solutions of `f^n(x) = x`.
 *
 * # Safety
 * `map` must be a live handle and `out` a valid pointer.
 */
enum ChaoscopeStatus chaoscope_periodic_points_json(const struct ChaoscopeMap *map,
                                                    uintptr_t n,
                                                    char **out);

/**
 * Searches for a turbulence witness. On success `*out` holds
 * `{"witness": ..., "quadruple": ...}`; a map without one yields
 * `CHAOSCOPE_STATUS_NOT_FOUND`.
 *
 * # Safety
 * `map` must be a live handle and `out` a valid pointer.
 */
enum ChaoscopeStatus chaoscope_find_turbulence(const struct ChaoscopeMap *map, char **out);

/**
 * Whether `p` comes strictly before `q` in the Sharkovsky order.
 */
bool chaoscope_sharkovsky_precedes(uint64_t p, uint64_t q);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void chaoscope_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on the same thread.
 */
const char *chaoscope_last_error_message(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CHAOSCOPE_H */
