#include <math.h>
#include <stdio.h>

#include "entpot.h"

int main(void) {
    EntpotState *s = NULL;
    if (entpot_werner(0.5, &s) != ENTPOT_OK) return 1;
    double n = 0.0, c = 0.0, e = 0.0;
    if (entpot_negativity(s, &n) != ENTPOT_OK) return 2;
    if (entpot_concurrence(s, &c) != ENTPOT_OK) return 3;
    if (entpot_ree(s, 0.0, &e) != ENTPOT_OK) return 4;
    entpot_state_free(s);
    /* Werner: λ = 3/4, E_R = 1 − h(3/4) */
    double h = -0.75 * log2(0.75) - 0.25 * log2(0.25);
    if (fabs(n - 0.5) > 1e-12 || fabs(c - 0.5) > 1e-12 || fabs(e - (1.0 - h)) > 1e-8) return 5;
    if (entpot_horodecki(2.0, &s) != ENTPOT_ERR_DOMAIN) return 6;
    printf("%s %.12f %.12f %.12f\n", entpot_version(), n, c, e);
    return 0;
}
