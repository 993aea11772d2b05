#include <stdio.h>
#include <string.h>
#include "hmplan.h"

int main(int argc, char **argv) {
    if (argc < 3) return 10;
    FILE *f;
    static char dom[1 << 14], prob[1 << 14];
    f = fopen(argv[1], "r"); if (!f) return 11; dom[fread(dom, 1, sizeof dom - 1, f)] = 0; fclose(f);
    f = fopen(argv[2], "r"); if (!f) return 12; prob[fread(prob, 1, sizeof prob - 1, f)] = 0; fclose(f);

    HmPlanner *p = NULL;
    if (hm_planner_new(dom, prob, &p) != HM_STATUS_OK) return 13;
    HmConfig cfg = hm_config_default();
    cfg.pipeline = HM_PIPELINE_TP4;
    if (hm_planner_solve(p, &cfg) != HM_STATUS_OK) return 14;
    int64_t num = 0, den = 0;
    if (hm_planner_metric(p, &num, &den) != HM_STATUS_OK) return 15;
    char *text = NULL;
    if (hm_planner_plan_text(p, &text) != HM_STATUS_OK) return 16;
    printf("metric %lld/%lld steps %zu\n%s", (long long)num, (long long)den, hm_planner_step_count(p), text);
    hm_string_free(text);
    hm_planner_free(p);
    return 0;
}
