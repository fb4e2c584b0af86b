#ifndef MONOID_CA_H
#define MONOID_CA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum McaStatus {
  MCA_STATUS_OK = 0,
  MCA_STATUS_NULL_POINTER = 1,
  MCA_STATUS_INVALID_UTF8 = 2,
  MCA_STATUS_PARSE = 3,
  MCA_STATUS_INVALID_ARGUMENT = 4,
  MCA_STATUS_CAP_EXCEEDED = 5,
  MCA_STATUS_NOT_INJECTIVE = 6,
  MCA_STATUS_MISMATCH = 7,
  MCA_STATUS_UNSUPPORTED = 8,
  MCA_STATUS_PANIC = 9,
} McaStatus;

/**
 * A cellular automaton over some monoid.
 */
typedef struct McaCa McaCa;

/**
 * A full configuration over a finite monoid.
 */
typedef struct McaConfig McaConfig;

/**
 * A monoid: finite table or built-in infinite monoid.
 */
typedef struct McaMonoid McaMonoid;

/**
 * Injectivity and surjectivity of an automaton over a finite monoid.
 */
typedef struct McaCaStatus {
  bool injective;
  bool surjective;
  bool bijective;
} McaCaStatus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next library call on the same thread.
 */
const char *mca_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void mca_string_free(char *s);

/**
 * Looks up a built-in monoid such as `bicyclic`, `cyclic:4` or `map:2`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out_monoid` a valid pointer.
 */
enum McaStatus mca_monoid_builtin(const char *name, struct McaMonoid **out_monoid);

/**
 * Parses a finite monoid in the `monoid v1` text format.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out_monoid` a valid pointer.
 */
enum McaStatus mca_monoid_parse(const char *src, struct McaMonoid **out_monoid);

/**
 * # Safety
 * `m` must be null or a handle from this library not yet freed.
 */
void mca_monoid_free(struct McaMonoid *m);

/**
 * Number of elements; `MCA_STATUS_UNSUPPORTED` for infinite monoids.
 *
 * # Safety
 * `m` must be a live handle and `out_size` a valid pointer.
 */
enum McaStatus mca_monoid_size(const struct McaMonoid *m, size_t *out_size);

/**
 * Product `a * b` of two elements of a finite monoid.
 *
 * # Safety
 * `m` must be a live handle and `out_product` a valid pointer.
 */
enum McaStatus mca_monoid_multiply(const struct McaMonoid *m,
                                   size_t a,
                                   size_t b,
                                   size_t *out_product);

/**
 * Parses an automaton in the `ca v1` text format over `m`.
 *
 * # Safety
 * `m` must be a live handle, `src` a NUL-terminated string and `out_ca` a
 * valid pointer.
 */
enum McaStatus mca_ca_parse(const struct McaMonoid *m, const char *src, struct McaCa **out_ca);

/**
 * Automaton from a memory of finite-monoid indices (any order, no
 * duplicates) and a rule table of `alphabet^memory_len` entries indexed with
 * the first memory element most significant.
 *
 * # Safety
 * `memory` and `rule` must point to `memory_len` and `rule_len` readable
 * elements respectively.
 */
enum McaStatus mca_ca_new(const struct McaMonoid *m,
                          uint32_t alphabet,
                          const size_t *memory,
                          size_t memory_len,
                          const uint32_t *rule,
                          size_t rule_len,
                          struct McaCa **out_ca);

/**
 * # Safety
 * `ca` must be null or a handle from this library not yet freed.
 */
void mca_ca_free(struct McaCa *ca);

/**
 * Serializes `ca` in the `ca v1` text format. Free the result with
 * [`mca_string_free`].
 *
 * # Safety
 * `ca` must be a live handle and `out_text` a valid pointer.
 */
enum McaStatus mca_ca_to_text(const struct McaCa *ca, char **out_text);

/**
 * `first ∘ second`: applies `second`, then `first`.
 *
 * # Safety
 * Both automata must be live handles and `out_ca` a valid pointer.
 */
enum McaStatus mca_ca_compose(const struct McaCa *first,
                              const struct McaCa *second,
                              struct McaCa **out_ca);

/**
 * The same automaton re-expressed on its minimal memory set.
 *
 * # Safety
 * `ca` must be a live handle and `out_ca` a valid pointer.
 */
enum McaStatus mca_ca_minimize(const struct McaCa *ca, struct McaCa **out_ca);

/**
 * Injectivity and surjectivity by scanning every configuration, refusing
 * more than `config_cap` of them (0 selects the default cap).
 *
 * # Safety
 * `ca` must be a live handle and `out_status` a valid pointer.
 */
enum McaStatus mca_ca_status(const struct McaCa *ca,
                             uint64_t config_cap,
                             struct McaCaStatus *out_status);

/**
 * Configuration on the `len` elements of a finite monoid, `symbols[i]`
 * being the value at element `i`.
 *
 * # Safety
 * `symbols` must point to `len` readable values and `out_config` be valid.
 */
enum McaStatus mca_config_new(uint32_t alphabet,
                              const uint32_t *symbols,
                              size_t len,
                              struct McaConfig **out_config);

/**
 * # Safety
 * `cfg` must be null or a handle from this library not yet freed.
 */
void mca_config_free(struct McaConfig *cfg);

/**
 * Number of cells in the configuration.
 *
 * # Safety
 * `cfg` must be a live handle and `out_len` a valid pointer.
 */
enum McaStatus mca_config_len(const struct McaConfig *cfg, size_t *out_len);

/**
 * Copies the symbols into `buf`, which must hold at least the
 * configuration's length.
 *
 * # Safety
 * `cfg` must be a live handle and `buf` must point to `buf_len` writable values.
 */
enum McaStatus mca_config_symbols(const struct McaConfig *cfg, uint32_t *buf, size_t buf_len);

/**
 * `τ(x)` for a configuration over a finite monoid.
 *
 * # Safety
 * `ca` and `cfg` must be live handles and `out_config` a valid pointer.
 */
enum McaStatus mca_ca_apply(const struct McaCa *ca,
                            const struct McaConfig *cfg,
                            struct McaConfig **out_config);

/**
 * Checks every rule table over `memory` (all of `M` when `memory` is null)
 * for injective but non-surjective automata. Writes the `report v1` text to
 * `out_report` and the number of violations to `out_violations`. Zero caps
 * and thread counts select the defaults.
 *
 * # Safety
 * `m` must be a live handle; `memory` must be null or point to `memory_len`
 * values; the out pointers must be valid.
 */
enum McaStatus mca_sweep_surjunctive(const struct McaMonoid *m,
                                     uint32_t alphabet,
                                     const size_t *memory,
                                     size_t memory_len,
                                     size_t threads,
                                     uint64_t rule_cap,
                                     char **out_report,
                                     uint64_t *out_violations);

/**
 * Runs the bicyclic left-inverse and image-constraint demonstration at the
 * given window depth and writes its `report v1` text. `out_holds` receives
 * whether every certificate checked out.
 *
 * # Safety
 * The out pointers must be valid.
 */
enum McaStatus mca_demo_bicyclic(uint32_t alphabet,
                                 uint64_t depth,
                                 char **out_report,
                                 bool *out_holds);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MONOID_CA_H */
