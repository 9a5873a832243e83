#ifndef JETGROUPS_H
#define JETGROUPS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. The nonzero domain codes match the command line exit codes.
typedef enum JgStatus {
  JG_STATUS_OK = 0,
  JG_STATUS_DOMAIN = 1,
  JG_STATUS_PARSE = 2,
  JG_STATUS_VERIFY = 3,
  JG_STATUS_NULL_POINTER = 4,
  JG_STATUS_INVALID_UTF8 = 5,
  JG_STATUS_PANIC = 6,
} JgStatus;

// Opaque jet of a formal diffeomorphism.
typedef struct JgDiffeo JgDiffeo;

// Opaque jet of a formal vector field.
typedef struct JgField JgField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread ("" after a success).
// The pointer stays valid until the next library call on the same thread.
const char *jg_last_error(void);

// Releases a string returned by the library.
//
// # Safety
// `s` must come from this library and not have been freed.
void jg_string_free(char *s);

// Parses a jet such as `(x + y^2, y)` in `n` variables at order `order`.
//
// # Safety
// `src` must be a nul-terminated string and `out` a valid pointer.
enum JgStatus jg_diffeo_parse(const char *src, uintptr_t n, uint32_t order, struct JgDiffeo **out);

// Parses a vector field such as `(x^2)*d/dx`.
//
// # Safety
// `src` must be a nul-terminated string and `out` a valid pointer.
enum JgStatus jg_field_parse(const char *src, uintptr_t n, uint32_t order, struct JgField **out);

// # Safety
// `p` must come from this library and not have been freed.
void jg_diffeo_free(struct JgDiffeo *p);

// # Safety
// `p` must come from this library and not have been freed.
void jg_field_free(struct JgField *p);

// `a ∘ b`.
//
// # Safety
// Handles must be live; `out` must be a valid pointer.
enum JgStatus jg_diffeo_compose(const struct JgDiffeo *a,
                                const struct JgDiffeo *b,
                                struct JgDiffeo **out);

// # Safety
// `a` must be live; `out` must be a valid pointer.
enum JgStatus jg_diffeo_invert(const struct JgDiffeo *a, struct JgDiffeo **out);

// Logarithm of a unipotent jet.
//
// # Safety
// `a` must be live; `out` must be a valid pointer.
enum JgStatus jg_diffeo_log(const struct JgDiffeo *a, struct JgField **out);

// Time-`t` flow of a nilpotent field; `t` is a scalar expression such as `1/2`.
//
// # Safety
// `x` must be live, `t` nul-terminated, `out` a valid pointer.
enum JgStatus jg_field_exp(const struct JgField *x, const char *t, struct JgDiffeo **out);

// Lie bracket `[a, b]`.
//
// # Safety
// Handles must be live; `out` must be a valid pointer.
enum JgStatus jg_field_bracket(const struct JgField *a,
                               const struct JgField *b,
                               struct JgField **out);

// `Z` with `exp(Z) = exp(a) ∘ exp(b)`.
//
// # Safety
// Handles must be live; `out` must be a valid pointer.
enum JgStatus jg_field_bch(const struct JgField *a, const struct JgField *b, struct JgField **out);

// Canonical text of a jet; free with `jg_string_free`.
//
// # Safety
// `a` must be live; `out` must be a valid pointer.
enum JgStatus jg_diffeo_render(const struct JgDiffeo *a, char **out);

// Canonical text of a field; free with `jg_string_free`.
//
// # Safety
// `a` must be live; `out` must be a valid pointer.
enum JgStatus jg_field_render(const struct JgField *a, char **out);

// JSON report of the G^2 derived-length check at jet order `order`.
//
// # Safety
// `out` must be a valid pointer.
enum JgStatus jg_verify_g2(uint32_t order, char **out);

// JSON report of the G^n derived-length check; `order = 0` picks the default start.
//
// # Safety
// `out` must be a valid pointer.
enum JgStatus jg_verify_gn(uintptr_t n, uint32_t order, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JETGROUPS_H */
