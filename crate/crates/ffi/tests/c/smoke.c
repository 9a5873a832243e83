#include <stdio.h>
#include <string.h>
#include "jetgroups.h"

int main(void) {
    JgDiffeo *phi = NULL, *inv = NULL, *id = NULL;
    char *text = NULL;
    if (jg_diffeo_parse("(x + y^2, y)", 2, 3, &phi) != JG_STATUS_OK) return 1;
    if (jg_diffeo_invert(phi, &inv) != JG_STATUS_OK) return 2;
    if (jg_diffeo_compose(phi, inv, &id) != JG_STATUS_OK) return 3;
    if (jg_diffeo_render(id, &text) != JG_STATUS_OK) return 4;
    printf("%s\n", text);
    jg_string_free(text);
    jg_diffeo_free(id);
    jg_diffeo_free(inv);
    jg_diffeo_free(phi);
    if (jg_diffeo_parse("(x +", 1, 3, &phi) != JG_STATUS_PARSE) return 5;
    printf("%s\n", jg_last_error());
    return 0;
}
