#ifndef CRSPARSE_H
#define CRSPARSE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every `crs_*` function.
 */
typedef enum CrsStatus {
  CRS_STATUS_OK = 0,
  CRS_STATUS_NULL_POINTER = 1,
  CRS_STATUS_INVALID_ARGUMENT = 2,
  CRS_STATUS_PARSE = 3,
  CRS_STATUS_IO = 4,
  CRS_STATUS_DISCONNECTED = 5,
  CRS_STATUS_NOT_PSD = 6,
  CRS_STATUS_DEGENERATE = 7,
  CRS_STATUS_ASSUMPTION_VIOLATED = 8,
  CRS_STATUS_SHAPE = 9,
  CRS_STATUS_BUFFER_TOO_SMALL = 10,
  CRS_STATUS_PANIC = 11,
} CrsStatus;

/**
 * Edge sampling scheme.
 */
typedef enum CrsMethod {
  /**
   * Probabilities proportional to edge weight.
   */
  CRS_METHOD_CR = 0,
  /**
   * Probabilities proportional to weight times effective resistance.
   */
  CRS_METHOD_ER = 1,
} CrsMethod;

/**
 * Opaque weighted undirected graph.
 */
typedef struct CrsGraph CrsGraph;

/**
 * Opaque result of a sparsification run.
 */
typedef struct CrsSketch CrsSketch;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread, or null if
 * none. The pointer stays valid until the next failing call on the thread.
 */
const char *crs_last_error_message(void);

/**
 * Static description of a status code.
 */
const char *crs_status_string(enum CrsStatus status);

/**
 * Builds a graph on `n` vertices from `m` edges given as parallel arrays.
 * Duplicate edges are merged by summing weights.
 *
 * # Safety
 * `us`, `vs`, `ws` must each point to `m` readable elements (or may be null
 * when `m == 0`); `out` must be writable.
 */
enum CrsStatus crs_graph_new(size_t n,
                             const size_t *us,
                             const size_t *vs,
                             const double *ws,
                             size_t m,
                             struct CrsGraph **out);

/**
 * Reads an edge-list file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum CrsStatus crs_graph_read(const char *path, struct CrsGraph **out);

/**
 * Writes an edge-list file atomically.
 *
 * # Safety
 * `g` must be a live graph handle; `path` a NUL-terminated string.
 */
enum CrsStatus crs_graph_write(const struct CrsGraph *g, const char *path);

/**
 * Releases a graph. Null is ignored.
 *
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void crs_graph_free(struct CrsGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum CrsStatus crs_graph_num_vertices(const struct CrsGraph *g, size_t *out);

/**
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum CrsStatus crs_graph_num_edges(const struct CrsGraph *g, size_t *out);

/**
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum CrsStatus crs_graph_total_weight(const struct CrsGraph *g, double *out);

/**
 * Edge `index` in canonical order (`u < v`, sorted).
 *
 * # Safety
 * `g` must be a live graph handle; `u`, `v`, `w` must be writable.
 */
enum CrsStatus crs_graph_edge(const struct CrsGraph *g,
                              size_t index,
                              size_t *u,
                              size_t *v,
                              double *w);

/**
 * Row-major `n × n` Laplacian into `buf` (capacity `len` values).
 *
 * # Safety
 * `g` must be a live graph handle; `buf` must hold `len` writable values.
 */
enum CrsStatus crs_graph_laplacian(const struct CrsGraph *g, double *buf, size_t len);

/**
 * Effective resistance of every edge, in canonical edge order.
 *
 * # Safety
 * `g` must be a live graph handle; `buf` must hold `len` writable values.
 */
enum CrsStatus crs_effective_resistances(const struct CrsGraph *g, double *buf, size_t len);

/**
 * `λ_max / λ₂` of the graph Laplacian.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum CrsStatus crs_condition_number(const struct CrsGraph *g, double *out);

/**
 * Two `K_k` cliques joined by a path of `path_edges` edges.
 *
 * # Safety
 * `out` must be writable.
 */
enum CrsStatus crs_gen_barbell(size_t k,
                               size_t path_edges,
                               uint32_t weight_max,
                               uint64_t seed,
                               struct CrsGraph **out);

/**
 * Erdős–Rényi graph with integer weights in `1..=weight_max`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CrsStatus crs_gen_random(size_t n,
                              double edge_prob,
                              uint32_t weight_max,
                              uint64_t seed,
                              struct CrsGraph **out);

/**
 * Samples `r` edges with replacement and builds the reweighted sketch.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum CrsStatus crs_sparsify(const struct CrsGraph *g,
                            enum CrsMethod method,
                            size_t r,
                            uint64_t seed,
                            struct CrsSketch **out);

/**
 * Copies the sketch graph into a new graph handle.
 *
 * # Safety
 * `s` must be a live sketch handle; `out` must be writable.
 */
enum CrsStatus crs_sketch_graph(const struct CrsSketch *s, struct CrsGraph **out);

/**
 * Fraction of source edges present in the sketch.
 *
 * # Safety
 * `s` must be a live sketch handle; `out` must be writable.
 */
enum CrsStatus crs_sketch_retained_fraction(const struct CrsSketch *s, double *out);

/**
 * Releases a sketch. Null is ignored.
 *
 * # Safety
 * `s` must be null or a handle not yet freed.
 */
void crs_sketch_free(struct CrsSketch *s);

/**
 * `‖L^{+1/2}(L − L̃)L^{+1/2}‖₂` for a graph `g` and its sketch `h`.
 *
 * # Safety
 * `g`, `h` must be live graph handles; `out` must be writable.
 */
enum CrsStatus crs_isotropic_error(const struct CrsGraph *g, const struct CrsGraph *h, double *out);

/**
 * `‖L − L̃‖₂` for a graph `g` and its sketch `h`.
 *
 * # Safety
 * `g`, `h` must be live graph handles; `out` must be writable.
 */
enum CrsStatus crs_additive_error(const struct CrsGraph *g, const struct CrsGraph *h, double *out);

/**
 * `⌈1/(δ²ε²)⌉`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CrsStatus crs_r_min_frobenius(double eps, double delta, uint64_t *out);

/**
 * Trial count for `‖AAᵀ − Y‖₂ ≤ ε` given `frobsq = ‖A‖_F²` and `‖A‖₂ ≤ 1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CrsStatus crs_r_min_spectral(double frobsq,
                                  double eps,
                                  double delta,
                                  uint64_t *out);

/**
 * Trial count for the multiplicative guarantee of the weight-proportional
 * sparsifier, given total weight and the largest singular value of the
 * boundary matrix.
 *
 * # Safety
 * `out` must be writable.
 */
enum CrsStatus crs_r_min_sparsifier(double total_weight,
                                    double sigma_max,
                                    double eps,
                                    double delta,
                                    uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRSPARSE_H */
