/*
 * qgd - geometric regime detection for financial feature streams
 *
 * C interface to the qgd core. All functions return a qgd_status; on any
 * failure qgd_last_error() carries a human-readable message for the calling
 * thread. Handles are opaque and must be released with their destroy
 * function. The library holds no global mutable state beyond the per-thread
 * error buffer, so distinct handles can be used from distinct threads.
 */
#ifndef QGD_H
#define QGD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qgd_status {
    QGD_OK = 0,
    QGD_ERR_INVALID = 1,    /* bad arguments, unparseable input */
    QGD_ERR_IO = 2,         /* missing or unwritable files */
    QGD_ERR_NUMERICAL = 3,  /* degenerate or ill-conditioned computation */
    QGD_ERR_VALIDATION = 4, /* a validation check evaluated and failed */
    QGD_ERR_INTERNAL = 5
} qgd_status;

const char* qgd_version(void);

/* message for the most recent failure on this thread; never NULL */
const char* qgd_last_error(void);

/* ---- run configuration ------------------------------------------------ */

typedef struct qgd_config qgd_config;

qgd_status qgd_config_create(qgd_config** out);                    /* defaults */
qgd_status qgd_config_load(const char* path, qgd_config** out);    /* JSON file */
qgd_status qgd_config_parse(const char* json, qgd_config** out);   /* JSON text */

/* dotted key with a JSON-encoded value, e.g. ("overlay.tau", "2.5") */
qgd_status qgd_config_set(qgd_config* cfg, const char* dotted_key, const char* json_value);

void qgd_config_destroy(qgd_config* cfg);

/* ---- pipeline commands (outputs land in the configured output_dir) ---- */

qgd_status qgd_run_features(const qgd_config* cfg);
qgd_status qgd_run_score(const qgd_config* cfg);
qgd_status qgd_run_evaluate(const qgd_config* cfg);
qgd_status qgd_run_walkforward(const qgd_config* cfg);
qgd_status qgd_run_overlay(const qgd_config* cfg);

/* Runs the formal-result checks (gap positivity, curvature-gap bound,
 * Chern quantization, QFI-metric identity) and writes validation.json.
 * *all_passed is set to 1 when every check passes, else 0; a failed check
 * also yields QGD_ERR_VALIDATION. */
qgd_status qgd_run_validate(const qgd_config* cfg, int* all_passed);

/* ---- direct numerical access ------------------------------------------ */

typedef struct qgd_operator_set qgd_operator_set;

/* p Hermitian n x n operators, A_k = (M_k + M_k^H)/2 with standard complex
 * normal entries from a deterministic stream keyed by (seed, k + offset) */
qgd_status qgd_operator_set_random(int n, int p, uint64_t seed, int seed_offset,
                                   qgd_operator_set** out);

/* A_k = sqrt(scales[k]) * B_k over a fixed traceless Hermitian basis;
 * basis = 0 selects the generalized Gell-Mann enumeration, basis = 1 the
 * tensor-product Pauli enumeration (n must be a power of two) */
qgd_status qgd_operator_set_scaled_basis(int n, int p, const double* scales, int basis,
                                         qgd_operator_set** out);

void qgd_operator_set_destroy(qgd_operator_set* ops);

/* Ground state of H(x) = 1/2 sum_k (A_k - x_k I)^2 at the length-p point x.
 * e0, gap, degenerate may be NULL; state_re/state_im, when non-NULL, must
 * hold n doubles each. */
qgd_status qgd_ground_state(const qgd_operator_set* ops, const double* x, int p, double* e0,
                            double* gap, int* degenerate, double* state_re, double* state_im);

/* Berry curvature F_ab at x from the gauge-invariant plaquette of side eps */
qgd_status qgd_berry_curvature(const qgd_operator_set* ops, const double* x, int p, double eps,
                               int a, int b, double* f_ab);

/* Quantum metric at x written to g as a row-major p x p matrix.
 * method = 0: perturbation theory (exact dH), method = 1: central
 * differences of step eps with gauge-aligned neighbor states. */
qgd_status qgd_quantum_metric(const qgd_operator_set* ops, const double* x, int p, int method,
                              double eps, double* g);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QGD_H */
