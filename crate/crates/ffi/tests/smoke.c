#include <stdio.h>
#include <string.h>
#include "oricolor.h"

int main(void) {
    OcTarget *t9 = NULL;
    OcGraph *g = NULL;
    OcColoring *c = NULL;
    if (oc_target_t9(&t9) != OC_STATUS_OK) return 1;
    if (oc_graph_generate("bounded-degree", 50, 3, 7, &g) != OC_STATUS_OK) return 2;
    if (oc_color(g, 3, true, &c) != OC_STATUS_OK) return 3;
    size_t n = oc_graph_order(g);
    size_t colors[50];
    for (size_t v = 0; v < n; v++) {
        if (oc_coloring_get(c, v, &colors[v], NULL) != OC_STATUS_OK) return 4;
    }
    if (oc_verify(g, t9, colors, n) != OC_STATUS_OK) return 5;
    if (oc_graph_parse("digraph 1 0\nbogus\n", &g) != OC_STATUS_PARSE) return 6;
    char msg[128];
    if (oc_last_error(msg, sizeof msg) == 0 || strstr(msg, "line 2") == NULL) return 7;
    printf("ok %zu\n", oc_coloring_part_bound(c, 0));
    oc_coloring_free(c);
    oc_graph_free(g);
    oc_target_free(t9);
    return 0;
}
