/* Minimal consumer of the C ABI.
 *
 *   cargo build -p bivnorm-ffi --release
 *   cc crates/ffi/examples/demo.c -Icrates/ffi/include \
 *      target/release/libbivnorm_ffi.a -lpthread -ldl -lm -o demo
 */
#include <stdio.h>

#include "bivnorm.h"

int main(void) {
    double p;
    BivnormStatus st = bivnorm_phi2(0.0, 0.0, 0.5, &p);
    if (st != BIVNORM_STATUS_OK) {
        fprintf(stderr, "phi2: %s\n", bivnorm_status_string(st));
        return 1;
    }
    printf("Phi2(0, 0; 0.5) = %.17g\n", p);

    st = bivnorm_phi2(0.0, 0.0, 2.0, &p);
    printf("Phi2(0, 0; 2.0) -> %s: %s\n", bivnorm_status_string(st), bivnorm_last_error_message());

    BivnormProfileConfig *cfg = bivnorm_profile_config_new();
    bivnorm_profile_config_set_buckets(cfg, 3);
    bivnorm_profile_config_set_samples(cfg, 10);
    BivnormProfile *prof = NULL;
    st = bivnorm_profile_run(cfg, &prof);
    bivnorm_profile_config_free(cfg);
    if (st != BIVNORM_STATUS_OK) {
        fprintf(stderr, "profile: %s\n", bivnorm_last_error_message());
        return 1;
    }
    for (size_t i = 0; i < bivnorm_profile_len(prof); i++) {
        BivnormBucketStats b;
        bivnorm_profile_bucket(prof, i, &b);
        printf("bucket %llu: x_center %.1f max %.3e\n", (unsigned long long)b.n, b.x_center,
               b.max_abs_err);
    }
    bivnorm_profile_free(prof);
    return 0;
}
