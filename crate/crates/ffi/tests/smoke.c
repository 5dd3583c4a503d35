#include <stdio.h>
#include <string.h>

#include "twisted_satake.h"

int main(void) {
    TsDatum *d = NULL;
    if (ts_datum_from_preset("PGL2", &d) != TS_STATUS_OK) {
        fprintf(stderr, "load: %s\n", ts_last_error());
        return 1;
    }
    size_t free_rank = 0, len = 0;
    uint64_t factors[4];
    if (ts_kottwitz_components(d, &free_rank, factors, 4, &len) != TS_STATUS_OK) {
        return 1;
    }
    printf("components %zu", free_rank);
    for (size_t i = 0; i < len; i++) {
        printf(" %llu", (unsigned long long)factors[i]);
    }
    printf("\n");

    const char *argv[] = {"tensor", "1", "1"};
    char *json = NULL;
    if (ts_run_json(d, argv, 3, &json) != TS_STATUS_OK) {
        fprintf(stderr, "tensor: %s\n", ts_last_error());
        return 1;
    }
    printf("%s\n", strstr(json, "\"summands\"") ? "summands present" : json);
    ts_string_free(json);
    ts_datum_free(d);

    if (ts_datum_from_preset("nope", &d) != TS_STATUS_UNKNOWN_PRESET || d != NULL) {
        return 1;
    }
    printf("error %s\n", ts_last_error());
    return 0;
}
