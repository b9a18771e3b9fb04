/* End-to-end exercise of the sinklock C API: build a graph, read its
 * closed form, enumerate exactly, sample an orientation, run a full
 * simulation, and verify the trace. Exits nonzero on the first failure. */

#include "sinklock.h"

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int check(sl_status status, const char *what) {
    if (status != SL_OK) {
        fprintf(stderr, "%s failed (%d): %s\n", what, (int)status,
                sl_last_error_message());
        return 1;
    }
    return 0;
}

int main(void) {
    printf("sinklock %s\n", sl_version());

    /* A 4-cycle, built from a flat edge array. */
    const uint32_t edges[] = {0, 1, 1, 2, 2, 3, 0, 3};
    sl_graph *graph = NULL;
    if (check(sl_graph_from_edges(4, edges, 4, &graph), "graph"))
        return 1;
    if (sl_graph_vertex_count(graph) != 4 || sl_graph_edge_count(graph) != 4) {
        fprintf(stderr, "wrong graph shape\n");
        return 1;
    }

    /* Closed form and exact enumeration must agree: E[X] = n/4 = 1. */
    double value = 0.0;
    sl_relation relation;
    if (check(sl_closed_form("{\"class\":\"cycle\",\"n\":4}",
                             SL_STAT_EXPECTED_SINKS, &value, &relation),
              "closed form"))
        return 1;
    double expected = 0.0, prob = 0.0;
    if (check(sl_exact_stats(graph, &expected, &prob), "exact stats"))
        return 1;
    if (relation != SL_REL_EQUALS || value != expected) {
        fprintf(stderr, "closed form %f disagrees with enumeration %f\n",
                value, expected);
        return 1;
    }
    printf("E[sinks] = %f, Pr[X > 0] = %f\n", expected, prob);

    /* Sample round 1's orientation and list its sinks. */
    sl_orientation *orientation = NULL;
    if (check(sl_orientation_sample(graph, 7, 1, &orientation), "orientation"))
        return 1;
    size_t count = 0;
    if (check(sl_orientation_sinks(orientation, NULL, 0, &count), "sink count"))
        return 1;
    uint32_t sinks[4];
    if (count > 4 ||
        check(sl_orientation_sinks(orientation, sinks, count, &count), "sinks"))
        return 1;
    printf("round 1 sinks:");
    for (size_t i = 0; i < count; i++)
        printf(" %u", sinks[i]);
    printf("\n");
    sl_orientation_free(orientation);

    /* Simulate to completion and verify the trace. */
    char *trace = NULL;
    if (check(sl_simulate_central(graph, 7, 0, &trace), "simulate"))
        return 1;
    int32_t clean = 0;
    char *report = NULL;
    if (check(sl_verify_trace(trace, &clean, &report), "verify"))
        return 1;
    if (clean != 1) {
        fprintf(stderr, "engine trace failed verification: %s\n", report);
        return 1;
    }
    printf("trace verified clean (%zu bytes of report)\n", strlen(report));
    sl_string_free(report);
    sl_string_free(trace);

    /* Error handling: a loop edge must be rejected with a message. */
    const uint32_t bad[] = {2, 2};
    sl_graph *rejected = NULL;
    if (sl_graph_from_edges(4, bad, 1, &rejected) != SL_ERR_INVALID_ARGUMENT) {
        fprintf(stderr, "loop edge was not rejected\n");
        return 1;
    }
    printf("loop edge rejected: %s\n", sl_last_error_message());

    sl_graph_free(graph);
    printf("ok\n");
    return 0;
}
