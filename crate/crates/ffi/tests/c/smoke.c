#include <stdio.h>
#include <string.h>

#include "monoid_ca.h"

#define CHECK(call)                                                        \
    do {                                                                   \
        McaStatus s_ = (call);                                             \
        if (s_ != MCA_STATUS_OK) {                                         \
            fprintf(stderr, "%s -> %d: %s\n", #call, (int)s_,              \
                    mca_last_error() ? mca_last_error() : "(none)");       \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    McaMonoid *z3 = NULL;
    CHECK(mca_monoid_builtin("cyclic:3", &z3));
    size_t n = 0;
    CHECK(mca_monoid_size(z3, &n));
    if (n != 3) return 2;

    /* x(m) xor x(m + 1) */
    size_t memory[2] = {0, 1};
    uint32_t rule[4] = {0, 1, 1, 0};
    McaCa *xor_ca = NULL;
    CHECK(mca_ca_new(z3, 2, memory, 2, rule, 4, &xor_ca));

    uint32_t cells[3] = {1, 0, 0};
    McaConfig *x = NULL, *y = NULL;
    CHECK(mca_config_new(2, cells, 3, &x));
    CHECK(mca_ca_apply(xor_ca, x, &y));
    uint32_t out[3];
    CHECK(mca_config_symbols(y, out, 3));
    printf("%u %u %u\n", out[0], out[1], out[2]);

    McaCaStatus st;
    CHECK(mca_ca_status(xor_ca, 0, &st));
    printf("injective %d surjective %d\n", st.injective, st.surjective);

    char *report = NULL;
    uint64_t violations = 1;
    CHECK(mca_sweep_surjunctive(z3, 2, NULL, 0, 1, 0, &report, &violations));
    printf("violations %llu\n", (unsigned long long)violations);
    mca_string_free(report);

    McaMonoid *bad = NULL;
    if (mca_monoid_builtin("nonsense", &bad) == MCA_STATUS_OK) return 3;
    if (mca_last_error() == NULL) return 4;

    mca_config_free(y);
    mca_config_free(x);
    mca_ca_free(xor_ca);
    mca_monoid_free(z3);
    return 0;
}
