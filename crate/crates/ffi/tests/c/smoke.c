#include <stdio.h>
#include <math.h>
#include "pdrich.h"

static int check(PdrichStatus s, const char *what) {
    if (s != PDRICH_STATUS_OK) {
        fprintf(stderr, "%s failed: %d %s\n", what, (int)s, pdrich_last_error());
        return 1;
    }
    return 0;
}

int main(void) {
    PdrichModel *model = NULL;
    if (check(pdrich_model_new(0.5, 1.0, &model), "model_new")) return 1;

    double mean = 0.0;
    if (check(pdrich_km_mean(model, 3, 2, 1, &mean), "km_mean")) return 1;
    printf("km_mean %.17g\n", mean);

    PdrichPmf *pmf = NULL;
    if (check(pdrich_kn_pmf(model, 5, &pmf), "kn_pmf")) return 1;
    size_t len = pdrich_pmf_len(pmf);
    double buf[16];
    if (check(pdrich_pmf_copy(pmf, buf, 16), "pmf_copy")) return 1;
    double total = 0.0;
    for (size_t i = 0; i < len; i++) total += buf[i];
    printf("kn_pmf support_min %zu len %zu total %.17g\n", pdrich_pmf_support_min(pmf), len, total);
    pdrich_pmf_free(pmf);

    PdrichModel *bad = NULL;
    PdrichStatus s = pdrich_model_new(1.5, 1.0, &bad);
    printf("bad_status %d\n", (int)s);
    pdrich_model_free(model);
    return fabs(total - 1.0) < 1e-12 && s == PDRICH_STATUS_INVALID_PARAMS ? 0 : 2;
}
