#include <stdio.h>
#include <string.h>
#include <assert.h>
#include "glmy.h"

int main(void) {
    const char *text = "0->1\n0->2\n1->3\n1->4\n2->3\n2->4\n5->3\n5->4";
    GlmyDigraph *g = NULL;
    assert(glmy_digraph_parse(text, &g) == GLMY_STATUS_OK);
    assert(glmy_digraph_vertex_count(g) == 6);

    GlmyComplex *c = NULL;
    assert(glmy_complex_build(g, -1, &c) == GLMY_STATUS_OK);
    uint64_t betti[8];
    uintptr_t written = 0;
    assert(glmy_complex_betti(c, betti, 8, &written) == GLMY_STATUS_OK);
    assert(written == 3);
    assert(betti[0] == 1 && betti[1] == 1 && betti[2] == 0);

    char *bits = NULL;
    uint32_t path[3] = {0, 2, 4};
    assert(glmy_encode_path(6, 6, path, 3, &bits) == GLMY_STATUS_OK);
    assert(strcmp(bits, "001000010000011000") == 0);
    glmy_string_free(bits);

    char *json = NULL;
    assert(glmy_qsim_json(text, 1, 2000, 7, 0, &json) == GLMY_STATUS_OK);
    assert(strstr(json, "\"betti_hat\":1") != NULL);
    glmy_string_free(json);

    bool agree = false;
    assert(glmy_oracle_check(text, &agree) == GLMY_STATUS_OK && agree);

    GlmyDigraph *bad = NULL;
    assert(glmy_digraph_parse("a->b\nb->a", &bad) == GLMY_STATUS_INVALID_INPUT);
    assert(strstr(glmy_last_error_message(), "cycle") != NULL);

    glmy_complex_free(c);
    glmy_digraph_free(g);
    printf("c smoke test passed (version %s)\n", glmy_version());
    return 0;
}
