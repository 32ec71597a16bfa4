#ifndef SHEAFRIG_H
#define SHEAFRIG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SrStatus {
  SR_STATUS_OK = 0,
  SR_STATUS_NULL_POINTER = 1,
  SR_STATUS_INVALID_UTF8 = 2,
  SR_STATUS_INVALID_INPUT = 3,
  SR_STATUS_DIMENSION_MISMATCH = 4,
  SR_STATUS_PRECONDITION = 5,
  SR_STATUS_BUDGET = 6,
  /**
   * Two independent computations disagreed. Report it.
   */
  SR_STATUS_INTERNAL = 7,
  SR_STATUS_IO = 8,
  SR_STATUS_PANIC = 9,
} SrStatus;

typedef struct SrAssociatedSpec SrAssociatedSpec;

/**
 * A graph or hypergraph with labelled vertices.
 */
typedef struct SrGraph SrGraph;

typedef struct SrMotionSpec SrMotionSpec;

typedef struct SrVerdict {
  size_t h0;
  size_t h1;
  size_t trivial_dim;
  bool connected;
  bool independent;
  bool rigid;
  bool minimally_rigid;
} SrVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string. Do not free.
 */
const char *sr_version(void);

/**
 * Message for the last failed call on this thread, or NULL after a success.
 * Valid until the next call into the library from the same thread.
 */
const char *sr_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void sr_string_free(char *s);

/**
 * Parses `{"vertices": [...], "edges": [...]}` or the `"hyperedges"` form.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum SrStatus sr_graph_from_json(const char *json, struct SrGraph **out_graph);

/**
 * # Safety
 * `g` must be valid; the returned string is freed with [`sr_string_free`].
 */
enum SrStatus sr_graph_to_json(const struct SrGraph *g, char **out_json);

/**
 * # Safety
 * `g` must be NULL or a handle from this library that has not been freed.
 */
void sr_graph_free(struct SrGraph *g);

/**
 * # Safety
 * `g` must be a valid handle and the out pointers writable.
 */
enum SrStatus sr_graph_counts(const struct SrGraph *g, size_t *out_vertices, size_t *out_edges);

/**
 * (d, ℓ)-sparsity via the pebble game.
 *
 * # Safety
 * `g` must be a valid handle and the out pointers writable.
 */
enum SrStatus sr_is_sparse(const struct SrGraph *g,
                           size_t d,
                           size_t l,
                           bool *out_sparse,
                           bool *out_tight);

/**
 * A random (n−1, n)-tight multigraph on `vertices` vertices.
 *
 * # Safety
 * `out_graph` must be writable.
 */
enum SrStatus sr_generate_tight(size_t n,
                                size_t vertices,
                                uint64_t seed,
                                struct SrGraph **out_graph);

/**
 * # Safety
 * `json` must be a nul-terminated string; `out_spec` must be writable.
 */
enum SrStatus sr_motion_spec_from_json(const char *json, struct SrMotionSpec **out_spec);

/**
 * Motion spec of a bar-joint framework given as framework JSON.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out_spec` must be writable.
 */
enum SrStatus sr_bar_joint_from_json(const char *json, struct SrMotionSpec **out_spec);

/**
 * Generic s-dimensional subspaces of ℚⁿ on each vertex of `g`.
 *
 * # Safety
 * `g` must be a valid handle; `out_spec` must be writable.
 */
enum SrStatus sr_motion_sample(const struct SrGraph *g,
                               size_t s,
                               size_t n,
                               uint64_t seed,
                               struct SrMotionSpec **out_spec);

/**
 * # Safety
 * `spec` must be valid; the returned string is freed with [`sr_string_free`].
 */
enum SrStatus sr_motion_spec_to_json(const struct SrMotionSpec *spec, char **out_json);

/**
 * # Safety
 * `spec` must be NULL or a handle from this library that has not been freed.
 */
void sr_motion_spec_free(struct SrMotionSpec *spec);

/**
 * # Safety
 * `spec` must be a valid handle; `out_verdict` must be writable.
 */
enum SrStatus sr_motion_analyze(const struct SrMotionSpec *spec, struct SrVerdict *out_verdict);

/**
 * Samples `trials` generic line configurations in ℚⁿ on the graph `g` and
 * compares their independence with sparsity of (n−2)Γ.
 *
 * # Safety
 * `g` must be a valid handle and the out pointers writable.
 */
enum SrStatus sr_main_theorem(const struct SrGraph *g,
                              size_t n,
                              size_t trials,
                              uint64_t seed,
                              bool *out_sparse,
                              bool *out_agrees);

/**
 * # Safety
 * `json` must be a nul-terminated string; `out_spec` must be writable.
 */
enum SrStatus sr_associated_from_json(const char *json, struct SrAssociatedSpec **out_spec);

/**
 * # Safety
 * `spec` must be valid; the returned string is freed with [`sr_string_free`].
 */
enum SrStatus sr_associated_to_json(const struct SrAssociatedSpec *spec, char **out_json);

/**
 * # Safety
 * `spec` must be NULL or a handle from this library that has not been freed.
 */
void sr_associated_free(struct SrAssociatedSpec *spec);

/**
 * h0 and h1 of the associated sheaf, computed two ways and cross-checked.
 *
 * # Safety
 * `spec` must be a valid handle and the out pointers writable.
 */
enum SrStatus sr_associated_cohomology(const struct SrAssociatedSpec *spec,
                                       size_t *out_h0,
                                       size_t *out_h1);

/**
 * An associated sheaf on `g` with h1 = 0, when (n−1, n)-sparsity allows one.
 * If `g` is not sparse the call succeeds with `*out_spec` set to NULL.
 *
 * # Safety
 * `g` must be a valid handle; `out_spec` must be writable.
 */
enum SrStatus sr_build_independent_sheaf(const struct SrGraph *g,
                                         size_t n,
                                         uint64_t seed,
                                         struct SrAssociatedSpec **out_spec);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHEAFRIG_H */
