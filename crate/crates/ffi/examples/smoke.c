#include <math.h>
#include <stdio.h>
#include "entrobound.h"

int main(void) {
    double z[] = {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0};
    double x[] = {.5, 0, .5, 0, .5, 0, .5, 0, .5, 0, -.5, 0, -.5, 0, .5, 0};
    double plus[] = {M_SQRT1_2, 0, M_SQRT1_2, 0};
    EntroboundMeasurement *m = NULL, *n = NULL;
    EntroboundState *s = NULL;
    EntroboundPairCheck check;
    if (entrobound_measurement_new(z, 2, 2, 1, &m) != ENTROBOUND_STATUS_OK ||
        entrobound_measurement_new(x, 2, 2, 1, &n) != ENTROBOUND_STATUS_OK ||
        entrobound_state_pure(plus, 2, &s) != ENTROBOUND_STATUS_OK ||
        entrobound_check_pair(m, n, s, 2.0, &check) != ENTROBOUND_STATUS_OK) {
        fprintf(stderr, "error: %s\n", entrobound_last_error());
        return 1;
    }
    printf("entrobound %s: H_2 + H_2/3 = %.6f, fbar = %.6f, passed = %d\n", entrobound_version(),
           check.entropy_alpha + check.entropy_beta, check.f_bar, check.passed);
    entrobound_state_free(s);
    entrobound_measurement_free(n);
    entrobound_measurement_free(m);
    return check.passed ? 0 : 1;
}
