#ifndef HYPERSEG_H
#define HYPERSEG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HsStatus {
  HS_STATUS_OK = 0,
  HS_STATUS_NULL_POINTER = 1,
  HS_STATUS_INVALID_ARGUMENT = 2,
  HS_STATUS_OUT_OF_RANGE = 3,
  HS_STATUS_BUFFER_TOO_SMALL = 4,
  HS_STATUS_RUNTIME = 5,
  HS_STATUS_PANIC = 6,
} HsStatus;

/*
 An embedded random graph.
 */
typedef struct HsDhrg HsDhrg;

/*
 A hyperbolic triangulation with its distance oracle.
 */
typedef struct HsGrid HsGrid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failing call on this thread; valid until the next
 call on this thread.
 */
const char *hs_last_error(void);

/*
 # Safety
 `out` must be a valid pointer to writable storage for a handle.
 */
enum HsStatus hs_grid_new(uint32_t q, uint32_t a, uint32_t b, struct HsGrid **out);

/*
 # Safety
 `grid` must come from [`hs_grid_new`] and not be used afterwards.
 */
void hs_grid_free(struct HsGrid *grid);

/*
 # Safety
 `grid` must be a live handle and `out` writable.
 */
enum HsStatus hs_grid_d_bound(const struct HsGrid *grid, uint32_t *out);

/*
 # Safety
 `grid` must be a live handle and `out` writable.
 */
enum HsStatus hs_grid_growth(const struct HsGrid *grid, double *out);

/*
 `|R_k|`; `OutOfRange` when it does not fit in 64 bits.

 # Safety
 `grid` must be a live handle and `out` writable.
 */
enum HsStatus hs_grid_ring_size(struct HsGrid *grid, uint32_t k, uint64_t *out);

/*
 Distance between two slash-separated addresses (empty for the root).

 # Safety
 `grid` must be a live handle, the addresses nul-terminated strings and
 `out` writable.
 */
enum HsStatus hs_grid_distance(struct HsGrid *grid,
                               const char *from,
                               const char *to,
                               uint32_t *out);

/*
 Sample `n` vertices with depth weights `exp(alpha r)` and connection
 probability `1 / (1 + exp(t d + shift))`. The grid handle is not consumed.

 # Safety
 `grid` must be a live handle and `out` writable.
 */
enum HsStatus hs_dhrg_generate(const struct HsGrid *grid,
                               size_t n,
                               uint32_t radius,
                               double alpha,
                               double t,
                               double shift,
                               uint64_t seed,
                               struct HsDhrg **out);

/*
 # Safety
 `graph` must come from [`hs_dhrg_generate`] and not be used afterwards.
 */
void hs_dhrg_free(struct HsDhrg *graph);

/*
 # Safety
 `graph` must be a live handle and the out-pointers writable.
 */
enum HsStatus hs_dhrg_size(const struct HsDhrg *graph, size_t *vertices, size_t *edges);

/*
 Writes edges as `2 * edges` 0-based vertex ids.

 # Safety
 `graph` must be a live handle and `buf` valid for `len` writes.
 */
enum HsStatus hs_dhrg_edges(const struct HsDhrg *graph, uint32_t *buf, size_t len);

/*
 # Safety
 `graph` must be a live handle and `out` writable.
 */
enum HsStatus hs_dhrg_loglik(const struct HsDhrg *graph, double *out);

/*
 Hill-climbing moves; `out` receives the final log-likelihood.

 # Safety
 `graph` must be a live handle and `out` writable.
 */
enum HsStatus hs_dhrg_local_search(struct HsDhrg *graph, size_t iters, uint64_t seed, double *out);

/*
 Pseudo-betweenness of every vertex into `buf[0..n]`.

 # Safety
 `graph` must be a live handle and `buf` valid for `len` writes.
 */
enum HsStatus hs_dhrg_betweenness(const struct HsDhrg *graph,
                                  double gamma,
                                  double *buf,
                                  size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERSEG_H */
