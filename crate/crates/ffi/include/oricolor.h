#ifndef ORICOLOR_H
#define ORICOLOR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OcStatus {
  OC_STATUS_OK = 0,
  // A property does not hold or a map is not a homomorphism.
  OC_STATUS_FAILS = 1,
  // No homomorphism exists.
  OC_STATUS_UNSAT = 2,
  OC_STATUS_NULL_ARGUMENT = 10,
  OC_STATUS_INVALID_ARGUMENT = 11,
  OC_STATUS_PARSE = 12,
  OC_STATUS_PRECONDITION = 13,
  OC_STATUS_UNSUPPORTED = 14,
  OC_STATUS_UNCERTIFIED = 15,
  OC_STATUS_BUDGET_EXHAUSTED = 16,
  OC_STATUS_CONTRADICTION = 17,
  OC_STATUS_IO = 18,
  OC_STATUS_PANIC = 19,
} OcStatus;

// A verified coloring; components may use different targets.
typedef struct OcColoring OcColoring;

// An oriented graph.
typedef struct OcGraph OcGraph;

// A target digraph with its structure (anti-twins, landmarks).
typedef struct OcTarget OcTarget;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length without the NUL, or
// 0 when there is none.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t oc_last_error(char *buf, size_t len);

// An edgeless graph on `n` vertices.
//
// # Safety
// `out` must be valid for writes.
enum OcStatus oc_graph_new(size_t n, struct OcGraph **out);

// Parses the digraph text format.
//
// # Safety
// `text` must be a NUL-terminated string and `out` valid for writes.
enum OcStatus oc_graph_parse(const char *text, struct OcGraph **out);

// Seeded random graph. `model` is one of the generator model names.
//
// # Safety
// `model` must be a NUL-terminated string and `out` valid for writes.
enum OcStatus oc_graph_generate(const char *model,
                                size_t n,
                                size_t param,
                                uint64_t seed,
                                struct OcGraph **out);

// # Safety
// `g` must be a live graph handle.
enum OcStatus oc_graph_add_arc(struct OcGraph *g, size_t u, size_t v);

// Number of vertices, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live graph handle.
size_t oc_graph_order(const struct OcGraph *g);

// # Safety
// `g` must be null or a live graph handle.
size_t oc_graph_arc_count(const struct OcGraph *g);

// # Safety
// `g` must be null or a live graph handle.
size_t oc_graph_max_degree(const struct OcGraph *g);

// # Safety
// `g` must be null or a handle not yet freed.
void oc_graph_free(struct OcGraph *g);

// Paley tournament QR_q.
//
// # Safety
// `out` must be valid for writes.
enum OcStatus oc_target_paley(uint64_t q, struct OcTarget **out);

// Tr(QR_p), or Tr*(QR_p) when `star` is true.
//
// # Safety
// `out` must be valid for writes.
enum OcStatus oc_target_tromp(uint64_t p, bool star, struct OcTarget **out);

// # Safety
// `out` must be valid for writes.
enum OcStatus oc_target_t9(struct OcTarget **out);

// A target in the digraph text format, with optional metadata comments.
//
// # Safety
// `text` must be a NUL-terminated string and `out` valid for writes.
enum OcStatus oc_target_parse(const char *text, struct OcTarget **out);

// # Safety
// `t` must be null or a live target handle.
size_t oc_target_order(const struct OcTarget *t);

// # Safety
// `t` must be null or a handle not yet freed.
void oc_target_free(struct OcTarget *t);

// Exhaustive (or, for Paley targets, symmetry-pruned) check of P(n,k).
// Returns `OC_STATUS_OK` when it holds and `OC_STATUS_FAILS` otherwise;
// `min_out` receives the minimum successor count found.
//
// # Safety
// `t` must be a live target handle; `min_out` null or valid for writes.
enum OcStatus oc_check_pnk(const struct OcTarget *t,
                           size_t n,
                           size_t k,
                           bool pruned,
                           size_t *min_out);

// Check of C(n,k) over all n-cliques; `min_out` receives `SIZE_MAX` when
// there is no n-clique.
//
// # Safety
// `t` must be a live target handle; `min_out` null or valid for writes.
enum OcStatus oc_check_cnk(const struct OcTarget *t, size_t n, size_t k, size_t *min_out);

// Colors `g` and verifies the result. `delta` 0 means the graph's own
// maximum degree. With `uniform` every component uses the target for Δ.
//
// # Safety
// `g` must be a live graph handle and `out` valid for writes.
enum OcStatus oc_color(const struct OcGraph *g,
                       size_t delta,
                       bool uniform,
                       struct OcColoring **out);

// Number of targets used; 1 when the coloring is uniform.
//
// # Safety
// `c` must be null or a live coloring handle.
size_t oc_coloring_part_count(const struct OcColoring *c);

// Order of the target of part `i`, or 0 when out of range.
//
// # Safety
// `c` must be null or a live coloring handle.
size_t oc_coloring_part_bound(const struct OcColoring *c, size_t i);

// Writes the name of the target of part `i` like [`oc_last_error`] does.
//
// # Safety
// `c` must be null or a live coloring handle; `buf` null or valid for `len` bytes.
size_t oc_coloring_part_target(const struct OcColoring *c, size_t i, char *buf, size_t len);

// Color and part index of vertex `v`.
//
// # Safety
// `c` must be a live coloring handle; the outputs null or valid for writes.
enum OcStatus oc_coloring_get(const struct OcColoring *c,
                              size_t v,
                              size_t *color_out,
                              size_t *part_out);

// # Safety
// `c` must be null or a handle not yet freed.
void oc_coloring_free(struct OcColoring *c);

// `OC_STATUS_OK` when `colors` (one entry per vertex) is a homomorphism
// into `t`, `OC_STATUS_FAILS` otherwise.
//
// # Safety
// Handles must be live; `colors` valid for `len` reads.
enum OcStatus oc_verify(const struct OcGraph *g,
                        const struct OcTarget *t,
                        const size_t *colors,
                        size_t len);

// Searches for a homomorphism `g → t` and writes it to `colors_out`
// (`len` must equal the order of `g`). `budget` 0 means unlimited.
//
// # Safety
// Handles must be live; `colors_out` valid for `len` writes.
enum OcStatus oc_solve(const struct OcGraph *g,
                       const struct OcTarget *t,
                       uint64_t budget,
                       size_t *colors_out,
                       size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORICOLOR_H */
