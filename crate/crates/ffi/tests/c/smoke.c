#include <stdio.h>
#include <string.h>
#include "gtt.h"

static const char *SRC =
    "def plus : Pi[1,0] (k : Nat) -> Pi[1,0] (n : Nat) -> Nat :=\n"
    "  \\[1] k. \\[1] n. natrec[0,0,1] (m. Nat) k (m r. suc r) n\n"
    "def plus23 : Nat := plus @[1] 2 @[1] 3\n";

#define EXPECT(c)                                                   \
    do {                                                            \
        if (!(c)) {                                                 \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, \
                    #c, gtt_last_error_message());                  \
            return 1;                                               \
        }                                                           \
    } while (0)

int main(void) {
    GttConfig *cfg = NULL;
    GttProgram *prog = NULL;
    char *out = NULL;
    uint64_t v = 0;
    EXPECT(gtt_config_new("linear", &cfg) == GTT_STATUS_OK);
    EXPECT(gtt_program_parse(SRC, &prog) == GTT_STATUS_OK);
    EXPECT(gtt_check(cfg, prog) == GTT_STATUS_OK);
    EXPECT(gtt_usage(cfg, prog, "plus", &out) == GTT_STATUS_OK);
    EXPECT(strcmp(out, "[k\xe2\x86\xa6" "1, n\xe2\x86\xa6" "1]") == 0);
    gtt_string_free(out);
    EXPECT(gtt_eval(cfg, prog, "plus23", &v) == GTT_STATUS_OK && v == 5);
    EXPECT(gtt_run(cfg, prog, "plus23", &out) == GTT_STATUS_OK);
    EXPECT(strcmp(out, "source=5 target(cbn)=5 target(cbv)=5 AGREE") == 0);
    gtt_string_free(out);
    EXPECT(gtt_eval(cfg, prog, "missing", &v) == GTT_STATUS_NOT_FOUND);
    EXPECT(strlen(gtt_last_error_message()) > 0);
    gtt_program_free(prog);
    gtt_config_free(cfg);
    puts("ok");
    return 0;
}
