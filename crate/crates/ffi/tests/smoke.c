#include <stdio.h>
#include "ellquad.h"

int main(void) {
    EllquadCurve *e = NULL;
    char *j = NULL;
    uint64_t n1 = 0, n2 = 0;

    if (ellquad_curve_new("[0,0,0,-1,0]", -1, &e) != ELLQUAD_STATUS_OK) {
        fprintf(stderr, "%s\n", ellquad_last_error());
        return 1;
    }
    if (ellquad_curve_j_invariant(e, &j) != ELLQUAD_STATUS_OK)
        return 1;
    printf("j=%s\n", j);
    ellquad_string_free(j);
    if (ellquad_curve_torsion(e, &n1, &n2) != ELLQUAD_STATUS_OK)
        return 1;
    printf("torsion=%llux%llu\n", (unsigned long long)n1, (unsigned long long)n2);
    ellquad_curve_free(e);

    EllquadStatus s = ellquad_curve_new("[0,0,0,0,0]", 1, &e);
    printf("status=%d error=%s\n", (int)s, ellquad_last_error());
    return 0;
}
