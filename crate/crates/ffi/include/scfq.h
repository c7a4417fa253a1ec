#ifndef SCFQ_H
#define SCFQ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ScfqBasis {
  SCFQ_BASIS_R = 0,
  SCFQ_BASIS_RFR = 1,
  SCFQ_BASIS_P = 2,
  SCFQ_BASIS_I = 3,
} ScfqBasis;

typedef enum ScfqStatus {
  SCFQ_STATUS_OK = 0,
  SCFQ_STATUS_NULL_POINTER = 1,
  SCFQ_STATUS_INVALID_INPUT = 2,
  SCFQ_STATUS_BOUND_EXCEEDED = 3,
  SCFQ_STATUS_FIT_FAILURE = 4,
  SCFQ_STATUS_TOO_SMALL_N = 5,
  SCFQ_STATUS_UNSUPPORTED_FIELD = 6,
  SCFQ_STATUS_BUFFER_TOO_SMALL = 7,
  SCFQ_STATUS_FAILURE = 8,
  SCFQ_STATUS_PANIC = 9,
} ScfqStatus;

// A finite combination of generators of one basis.
typedef struct ScfqFunction ScfqFunction;

// The stable class function ring over one field.
typedef struct ScfqRing ScfqRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// Valid until the next call on this thread.
const char *scfq_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void scfq_string_free(char *s);

// Creates a ring over F_q with default bounds.
//
// # Safety
// `out` must be valid for writes.
enum ScfqStatus scfq_ring_new(uint32_t q, struct ScfqRing **out);

// # Safety
// `ring` must come from [`scfq_ring_new`] and not have been freed. Null is ignored.
void scfq_ring_free(struct ScfqRing *ring);

// Number of conjugacy classes of GL_n(q).
//
// # Safety
// Pointers must be valid.
enum ScfqStatus scfq_class_count(const struct ScfqRing *ring, size_t n, size_t *out);

// `#{M : Mg = BM}` for class labels such as `{x+1:2}`.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum ScfqStatus scfq_btil(const struct ScfqRing *ring, const char *b, const char *g, int64_t *out);

// As [`scfq_btil`], counting full-rank `M` only.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum ScfqStatus scfq_btil_fr(const struct ScfqRing *ring,
                             const char *b,
                             const char *g,
                             int64_t *out);

// An empty combination in `basis`.
struct ScfqFunction *scfq_function_new(enum ScfqBasis basis);

// # Safety
// `f` must come from this library and not have been freed. Null is ignored.
void scfq_function_free(struct ScfqFunction *f);

// Adds `c·btil(B, ·)` (basis R) or `c·btil_fr(B, ·)` (basis Rfr).
//
// # Safety
// Pointers must be valid; `label` NUL-terminated.
enum ScfqStatus scfq_function_add_class(const struct ScfqRing *ring,
                                        struct ScfqFunction *f,
                                        const char *label,
                                        double re,
                                        double im);

// Adds `c·χ∘1` for row `row` of the character table of GL_m.
//
// # Safety
// `f` must be valid.
enum ScfqStatus scfq_function_add_induced(struct ScfqFunction *f,
                                          size_t m,
                                          size_t row,
                                          double re,
                                          double im);

// Adds `c·χ_{μ[N]}`; `mu` is `{1.0:2,1|1.1:1}` or a partition such as `2,1`.
//
// # Safety
// Pointers must be valid; `mu` NUL-terminated.
enum ScfqStatus scfq_function_add_irreducible(struct ScfqFunction *f,
                                              const char *mu,
                                              double re,
                                              double im);

// Number of terms with nonzero coefficient.
//
// # Safety
// `f` must be valid.
size_t scfq_function_len(const struct ScfqFunction *f);

// Rewrites `f` in `target`, storing a new handle in `out`.
//
// # Safety
// Pointers must be valid.
enum ScfqStatus scfq_change_basis(const struct ScfqRing *ring,
                                  const struct ScfqFunction *f,
                                  enum ScfqBasis target,
                                  struct ScfqFunction **out);

// The product `a·b` in the basis of `a`.
//
// # Safety
// Pointers must be valid.
enum ScfqStatus scfq_multiply(const struct ScfqRing *ring,
                              const struct ScfqFunction *a,
                              const struct ScfqFunction *b,
                              struct ScfqFunction **out);

// Text form of `f`; release with [`scfq_string_free`].
//
// # Safety
// Pointers must be valid.
enum ScfqStatus scfq_function_to_string(const struct ScfqRing *ring,
                                        const struct ScfqFunction *f,
                                        char **out);

// Values of `f` on the classes of GL_n, as interleaved `(re, im)` pairs in
// `values[0 .. 2*len]`. `*len` receives the class count; if `capacity` (in
// pairs) is smaller, nothing is written and `BUFFER_TOO_SMALL` is returned.
//
// # Safety
// `values` must be valid for `2*capacity` doubles.
enum ScfqStatus scfq_function_evaluate(const struct ScfqRing *ring,
                                       const struct ScfqFunction *f,
                                       size_t n,
                                       double *values,
                                       size_t capacity,
                                       size_t *len);

// Text labels of the classes of GL_n, one per line, in evaluation order.
//
// # Safety
// Pointers must be valid.
enum ScfqStatus scfq_class_labels(const struct ScfqRing *ring, size_t n, char **out);

// Runs the four-family span check at level `m` on GL_n.
//
// # Safety
// Pointers must be valid.
enum ScfqStatus scfq_verify_filtration(const struct ScfqRing *ring,
                                       size_t m,
                                       size_t n,
                                       size_t *rank,
                                       bool *pass);

// `p_μ` fitted over `qs` and checked at `holdout`, as text.
//
// # Safety
// `mu` NUL-terminated; arrays valid for their lengths.
enum ScfqStatus scfq_pmu(const char *mu,
                         const uint32_t *qs,
                         size_t qs_len,
                         const uint32_t *holdout,
                         size_t holdout_len,
                         char **out);

// Library version, statically allocated.
const char *scfq_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SCFQ_H */
