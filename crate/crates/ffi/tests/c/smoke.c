#include <stdio.h>
#include <string.h>

#include "euler_ffi.h"

int main(void) {
    EulerPoly *p = NULL;
    EulerDist *t = NULL;
    EulerDist *u = NULL;
    bool verified = false;
    char *text = NULL;

    if (euler_poly_parse("t1 + 3", 1, &p) != EULER_STATUS_OK) return 10;
    if (euler_dist_parse("delta(x1,2)", 1, &t) != EULER_STATUS_OK) return 11;
    if (euler_solve(p, t, &u, &verified) != EULER_STATUS_OK || !verified) return 12;
    if (euler_dist_format(u, &text) != EULER_STATUS_OK) return 13;
    printf("%s\n", text);
    euler_string_free(text);

    EulerPoly *bad = NULL;
    if (euler_poly_parse("t1*(t1+1", 1, &bad) != EULER_STATUS_PARSE) return 14;
    if (euler_last_error() == NULL) return 15;

    euler_dist_free(u);
    euler_dist_free(t);
    euler_poly_free(p);
    return 0;
}
