#include <stdio.h>
#include <string.h>
#include "ramify.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__); return 1; } } while (0)

int main(void) {
    RamifyPoly *f = NULL;
    CHECK(ramify_poly_parse("3", "t1^-2*t2", &f) == RAMIFY_STATUS_OK);
    uint64_t r_x = 0;
    CHECK(ramify_simulate(f, RAMIFY_TYPE_II, &r_x, NULL) == RAMIFY_STATUS_OK);
    CHECK(r_x == 2);
    char *s = NULL;
    CHECK(ramify_poly_to_string(f, &s) == RAMIFY_STATUS_OK);
    CHECK(strcmp(s, "t1^-2*t2") == 0);
    ramify_string_free(s);
    ramify_poly_free(f);

    int64_t pts[] = {0, 0, 1, 4, 2, 5};
    uint64_t r = 0;
    CHECK(ramify_r_prime(pts, 3, RAMIFY_TYPE_II, &r) == RAMIFY_STATUS_OK);
    CHECK(r == 10);

    RamifyPoly *bad = NULL;
    CHECK(ramify_poly_parse("3", "t1^-2 * x", &bad) == RAMIFY_STATUS_PARSE);
    CHECK(bad == NULL);
    CHECK(strstr(ramify_last_error(), "position 8") != NULL);
    puts("ok");
    return 0;
}
