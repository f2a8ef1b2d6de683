#include <stdio.h>
#include "crsparse.h"

int main(void) {
    CrsGraph *g = NULL, *h = NULL;
    CrsSketch *s = NULL;
    double err = 0.0, frac = 0.0;

    CrsStatus st = crs_gen_barbell(30, 41, 100, 7, &g);
    if (st == CRS_STATUS_OK) st = crs_sparsify(g, CRS_METHOD_ER, 1200, 1, &s);
    if (st == CRS_STATUS_OK) st = crs_sketch_graph(s, &h);
    if (st == CRS_STATUS_OK) st = crs_sketch_retained_fraction(s, &frac);
    if (st == CRS_STATUS_OK) st = crs_isotropic_error(g, h, &err);
    if (st != CRS_STATUS_OK) {
        fprintf(stderr, "error: %s: %s\n", crs_status_string(st), crs_last_error_message());
    } else {
        printf("retained %.3f of edges, isotropic error %.3f\n", frac, err);
    }
    crs_graph_free(h);
    crs_sketch_free(s);
    crs_graph_free(g);
    return st == CRS_STATUS_OK ? 0 : 1;
}
