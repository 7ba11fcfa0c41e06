#include <stdio.h>
#include <string.h>
#include "p2groups.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s\n", #cond); return 1; } } while (0)

int main(void) {
    P2Group *g = NULL;
    CHECK(p2_group_build(5, 3, false, &g) == P2_STATUS_OK);
    uint64_t order = 0;
    CHECK(p2_group_order(g, &order) == P2_STATUS_OK);
    CHECK(order == 5ull * 5 * 5 * 5);
    P2Family fam;
    size_t idx = 0;
    CHECK(p2_group_recognize(g, &fam, &idx) == P2_STATUS_OK);
    CHECK(fam == P2_FAMILY_CYCLIC && idx == 3);
    p2_group_free(g);

    g = NULL;
    CHECK(p2_group_build(9, 1, false, &g) == P2_STATUS_NOT_PRIME);
    char msg[128];
    CHECK(p2_last_error(msg, sizeof msg, NULL) == P2_STATUS_OK);
    CHECK(strstr(msg, "not prime") != NULL);

    size_t set[] = {1, 2, 3, 6};
    P2Cayley *c = NULL;
    CHECK(p2_cayley_new(3, true, set, 4, &c) == P2_STATUS_OK);
    P2Group *aut = NULL;
    CHECK(p2_cayley_automorphisms(c, &aut) == P2_STATUS_OK);
    CHECK(p2_group_order(aut, &order) == P2_STATUS_OK && order == 72);
    p2_group_free(aut);
    p2_cayley_free(c);
    puts("ok");
    return 0;
}
