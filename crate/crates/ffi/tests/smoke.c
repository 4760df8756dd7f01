#include <stdio.h>
#include <string.h>
#include "ratiolab.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s\n", #cond); return 1; } } while (0)

int main(void) {
    char *s = NULL;
    CHECK(ratiolab_distinguish_probability(14, 4, 1, 6, &s) == RATIOLAB_STATUS_OK);
    CHECK(strcmp(s, "15/1001") == 0);
    ratiolab_string_free(s);

    RatiolabInstance *inst = NULL;
    const char *json = "{\"family\":\"decreasing\",\"n\":10,\"alpha\":4,\"beta\":1,"
                       "\"epsilon\":\"1\",\"plant\":[0,1,2,3]}";
    CHECK(ratiolab_instance_from_json(json, &inst) == RATIOLAB_STATUS_OK);
    size_t set[] = {0, 1, 2, 3};
    CHECK(ratiolab_ratio(inst, set, 4, &s) == RATIOLAB_STATUS_OK);
    CHECK(strcmp(s, "1/4") == 0);
    ratiolab_string_free(s);

    size_t violations = 1;
    CHECK(ratiolab_verify(inst, RATIOLAB_FUNCTION_G_PLANTED, &violations) == RATIOLAB_STATUS_OK);
    CHECK(violations == 0);

    CHECK(ratiolab_eval(inst, RATIOLAB_FUNCTION_G, set, 4, &s) == RATIOLAB_STATUS_INVALID_ARGUMENT);
    CHECK(ratiolab_last_error() != NULL);
    ratiolab_instance_free(inst);

    CHECK(ratiolab_instance_from_json("{", &inst) == RATIOLAB_STATUS_INVALID_INSTANCE);
    printf("ok\n");
    return 0;
}
