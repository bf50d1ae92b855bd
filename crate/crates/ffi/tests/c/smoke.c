#include <stdio.h>
#include <string.h>

#include "mdsegtree.h"

#define CHECK(expr)                                                        \
    do {                                                                   \
        MstStatus s_ = (expr);                                             \
        if (s_ != MST_STATUS_OK) {                                         \
            fprintf(stderr, "%s failed: %s\n", #expr, mst_status_str(s_)); \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    MstTree2D *t = NULL;
    double sum = 0.0;
    CHECK(mst_tree2d_new(4, 4, &t));
    CHECK(mst_tree2d_update(t, 1, 2, 1, 2, 5.0));
    CHECK(mst_tree2d_query(t, 2, 3, 0, 1, &sum));
    if (sum != 5.0) {
        fprintf(stderr, "expected 5, got %g\n", sum);
        return 1;
    }
    if (mst_tree2d_query(t, 0, 4, 0, 0, &sum) != MST_STATUS_INVALID_ARGUMENT) {
        return 1;
    }
    mst_tree2d_free(t);

    MstExactTree2D *e = NULL;
    int64_t num = 0;
    uint64_t den = 0;
    CHECK(mst_exact2d_new(3, 3, &e));
    CHECK(mst_exact2d_update(e, 0, 2, 0, 2, 1, 3));
    CHECK(mst_exact2d_query(e, 0, 1, 0, 0, &num, &den));
    if (num != 2 || den != 3) {
        fprintf(stderr, "expected 2/3, got %lld/%llu\n", (long long)num, (unsigned long long)den);
        return 1;
    }
    mst_exact2d_free(e);

    size_t dims[3] = {4, 4, 4}, lo[3] = {1, 1, 1}, hi[3] = {2, 2, 2}, all[3] = {3, 3, 3}, zero[3] = {0, 0, 0};
    MstTreeND *nd = NULL;
    CHECK(mst_treend_new(dims, 3, &nd));
    CHECK(mst_treend_update(nd, lo, hi, 1.0));
    CHECK(mst_treend_query(nd, zero, all, &sum));
    mst_treend_free(nd);
    if (sum != 8.0) {
        return 1;
    }
    puts("ok");
    return 0;
}
