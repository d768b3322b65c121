// Exercises the public C surface exactly as an external consumer would:
// only qgd/qgd.h, no internal headers.
#include "qgd/qgd.h"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

static int failures = 0;

#define CHECK(cond)                                                      \
    do {                                                                 \
        if (!(cond)) {                                                   \
            std::printf("FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond);  \
            ++failures;                                                  \
        }                                                                \
    } while (0)

int main() {
    CHECK(std::strcmp(qgd_version(), "0.1.0") == 0);
    CHECK(qgd_last_error() != nullptr);

    // config lifecycle and error reporting
    qgd_config* cfg = nullptr;
    CHECK(qgd_config_create(&cfg) == QGD_OK);
    CHECK(cfg != nullptr);
    CHECK(qgd_config_set(cfg, "seed", "7") == QGD_OK);
    CHECK(qgd_config_set(cfg, "bogus.key", "1") == QGD_ERR_INVALID);
    CHECK(std::strlen(qgd_last_error()) > 0);
    CHECK(qgd_config_set(nullptr, "seed", "7") == QGD_ERR_INVALID);
    qgd_config_destroy(cfg);
    cfg = nullptr;

    CHECK(qgd_config_parse("{not valid json", &cfg) == QGD_ERR_INVALID);
    CHECK(qgd_config_load("no_such_config.json", &cfg) == QGD_ERR_IO);
    CHECK(qgd_config_parse("{\"seed\": 42}", &cfg) == QGD_OK);

    // running a data command with no assets configured is an input error
    CHECK(qgd_run_features(cfg) == QGD_ERR_INVALID);
    CHECK(qgd_run_score(nullptr) == QGD_ERR_INVALID);

    // random operator sets and the ground-state solver
    qgd_operator_set* ops = nullptr;
    CHECK(qgd_operator_set_random(8, 8, 42, 0, &ops) == QGD_OK);
    double x[8] = {0.5, -0.25, 0.125, 0.0, 0.3, -0.1, 0.2, 0.05};
    double e0 = -1.0, gap = -1.0;
    int degenerate = -1;
    double re[8], im[8];
    CHECK(qgd_ground_state(ops, x, 8, &e0, &gap, &degenerate, re, im) == QGD_OK);
    CHECK(e0 >= 0.0);
    CHECK(gap > 0.0);
    CHECK(degenerate == 0);
    double norm2 = 0.0;
    for (int i = 0; i < 8; ++i) norm2 += re[i] * re[i] + im[i] * im[i];
    CHECK(std::fabs(norm2 - 1.0) < 1e-10);

    // deterministic reconstruction: same seed, same spectrum
    qgd_operator_set* ops2 = nullptr;
    CHECK(qgd_operator_set_random(8, 8, 42, 0, &ops2) == QGD_OK);
    double e0b = 0.0;
    CHECK(qgd_ground_state(ops2, x, 8, &e0b, nullptr, nullptr, nullptr, nullptr) == QGD_OK);
    CHECK(e0 == e0b);
    qgd_operator_set_destroy(ops2);

    // dimension mismatch is rejected
    CHECK(qgd_ground_state(ops, x, 5, &e0, nullptr, nullptr, nullptr, nullptr) == QGD_ERR_INVALID);

    // Berry curvature and the two metric routes
    double f01 = 0.0;
    CHECK(qgd_berry_curvature(ops, x, 8, 1e-5, 0, 1, &f01) == QGD_OK);
    double f10 = 0.0;
    CHECK(qgd_berry_curvature(ops, x, 8, 1e-5, 1, 0, &f10) == QGD_OK);
    CHECK(f01 == -f10);
    CHECK(qgd_berry_curvature(ops, x, 8, 1e-5, 0, 0, &f01) == QGD_ERR_INVALID);

    double g_pt[64], g_fd[64];
    CHECK(qgd_quantum_metric(ops, x, 8, 0, 1e-5, g_pt) == QGD_OK);
    CHECK(qgd_quantum_metric(ops, x, 8, 1, 1e-5, g_fd) == QGD_OK);
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double diff = std::fabs(g_pt[i] - g_fd[i]);
        if (diff > worst) worst = diff;
    }
    CHECK(worst < 1e-8);
    qgd_operator_set_destroy(ops);

    // scaled-basis operators: sqrt(4) * sigma_x has ground energy 0 at x = 2
    qgd_operator_set* pauli = nullptr;
    const double scales[1] = {4.0};
    CHECK(qgd_operator_set_scaled_basis(2, 1, scales, 0, &pauli) == QGD_OK);
    const double x2[1] = {2.0};
    CHECK(qgd_ground_state(pauli, x2, 1, &e0, &gap, nullptr, nullptr, nullptr) == QGD_OK);
    CHECK(std::fabs(e0) < 1e-12);
    CHECK(std::fabs(gap - 8.0) < 1e-10);
    qgd_operator_set_destroy(pauli);

    // tensor-product basis needs a power-of-two dimension
    qgd_operator_set* bad = nullptr;
    const double s3[3] = {1.0, 1.0, 1.0};
    CHECK(qgd_operator_set_scaled_basis(6, 3, s3, 1, &bad) == QGD_ERR_INVALID);

    // validate command through the C API
    qgd_config_destroy(cfg);
    CHECK(qgd_config_parse(R"({
        "seed": 42,
        "output_dir": "qgd_test_tmp/capi_out",
        "validate": {"qfi_points": 10, "bound_points": 20, "sphere_grid": 16, "gap_steps": 100}
    })", &cfg) == QGD_OK);
    int all_passed = 0;
    CHECK(qgd_run_validate(cfg, &all_passed) == QGD_OK);
    CHECK(all_passed == 1);
    std::ifstream report("qgd_test_tmp/capi_out/validation.json");
    CHECK(report.good());
    qgd_config_destroy(cfg);

    if (failures == 0) std::printf("C API: all checks passed\n");
    return failures == 0 ? 0 : 1;
}
