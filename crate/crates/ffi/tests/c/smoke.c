#include <stdio.h>
#include <string.h>
#include "lord.h"

int main(int argc, char **argv) {
    if (argc != 2) {
        fprintf(stderr, "usage: smoke DATA.csv\n");
        return 2;
    }
    LordModel *model = NULL;
    LordStatus st = lord_train_csv(argv[1], NULL, 1.0, LORD_VARIANT_LORD, 1, &model);
    if (st != LORD_STATUS_OK) {
        fprintf(stderr, "train: %s\n", lord_last_error());
        return 1;
    }
    const char *names[] = {"A1", "A2", "A3"};
    const char *values[] = {"a1", "a1", NULL};
    char label[32];
    size_t needed = 0;
    st = lord_predict_row(model, names, values, 3, label, sizeof label, &needed);
    if (st != LORD_STATUS_OK) {
        fprintf(stderr, "predict: %s\n", lord_last_error());
        return 1;
    }
    st = lord_predict_row(model, names, values, 3, label, 1, &needed);
    printf("%s %zu %d\n", label, needed, st == LORD_STATUS_BUFFER_TOO_SMALL);
    lord_model_free(model);
    return 0;
}
