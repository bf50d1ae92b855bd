#ifndef MDSEGTREE_H
#define MDSEGTREE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MstStatus {
  MST_STATUS_OK = 0,
  MST_STATUS_NULL_POINTER = 1,
  MST_STATUS_INVALID_ARGUMENT = 2,
  MST_STATUS_OVERFLOW = 3,
  MST_STATUS_RESOURCE = 4,
  MST_STATUS_PANIC = 5,
} MstStatus;

/**
 * 2D tree over exact rationals.
 */
typedef struct MstExactTree2D MstExactTree2D;

/**
 * 1D tree over `f64`.
 */
typedef struct MstTree1D MstTree1D;

/**
 * 2D tree over `f64`.
 */
typedef struct MstTree2D MstTree2D;

/**
 * d-dimensional tree over `f64` (1 ≤ d ≤ 4).
 */
typedef struct MstTreeND MstTreeND;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated description of a status code.
 */
const char *mst_status_str(enum MstStatus status);

enum MstStatus mst_tree1d_new(size_t n, struct MstTree1D **out);

void mst_tree1d_free(struct MstTree1D *tree);

enum MstStatus mst_tree1d_update(struct MstTree1D *tree, size_t lo, size_t hi, double c);

enum MstStatus mst_tree1d_query(const struct MstTree1D *tree, size_t lo, size_t hi, double *out);

enum MstStatus mst_tree1d_visits(const struct MstTree1D *tree, uint64_t *out);

enum MstStatus mst_tree2d_new(size_t n, size_t m, struct MstTree2D **out);

void mst_tree2d_free(struct MstTree2D *tree);

enum MstStatus mst_tree2d_update(struct MstTree2D *tree,
                                 size_t x1,
                                 size_t x2,
                                 size_t y1,
                                 size_t y2,
                                 double c);

enum MstStatus mst_tree2d_query(const struct MstTree2D *tree,
                                size_t x1,
                                size_t x2,
                                size_t y1,
                                size_t y2,
                                double *out);

/**
 * Visited node bodies since the last reset. Either out-pointer may be null.
 */
enum MstStatus mst_tree2d_counters(const struct MstTree2D *tree,
                                   uint64_t *update_visits,
                                   uint64_t *query_visits);

enum MstStatus mst_tree2d_reset_counters(const struct MstTree2D *tree);

/**
 * `dims` points to `d` extents.
 */
enum MstStatus mst_treend_new(const size_t *dims, size_t d, struct MstTreeND **out);

void mst_treend_free(struct MstTreeND *tree);

/**
 * `lo` and `hi` each point to one inclusive bound per dimension.
 */
enum MstStatus mst_treend_update(struct MstTreeND *tree,
                                 const size_t *lo,
                                 const size_t *hi,
                                 double c);

enum MstStatus mst_treend_query(const struct MstTreeND *tree,
                                const size_t *lo,
                                const size_t *hi,
                                double *out);

enum MstStatus mst_treend_visits(const struct MstTreeND *tree,
                                 uint64_t *update_visits,
                                 uint64_t *query_visits);

enum MstStatus mst_exact2d_new(size_t n, size_t m, struct MstExactTree2D **out);

void mst_exact2d_free(struct MstExactTree2D *tree);

/**
 * Adds `c_num / c_den` to every cell in the box.
 */
enum MstStatus mst_exact2d_update(struct MstExactTree2D *tree,
                                  size_t x1,
                                  size_t x2,
                                  size_t y1,
                                  size_t y2,
                                  int64_t c_num,
                                  uint64_t c_den);

/**
 * Box sum in lowest terms. Returns `MST_STATUS_OVERFLOW` if the numerator
 * does not fit in 64 bits.
 */
enum MstStatus mst_exact2d_query(const struct MstExactTree2D *tree,
                                 size_t x1,
                                 size_t x2,
                                 size_t y1,
                                 size_t y2,
                                 int64_t *out_num,
                                 uint64_t *out_den);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MDSEGTREE_H */
