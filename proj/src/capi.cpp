#include "qgd/qgd.h"

#include <cstring>
#include <string>

#include "pipeline.hpp"

using namespace qgd;

namespace {

thread_local std::string g_last_error;

qgd_status to_status(Errc code) {
    switch (code) {
        case Errc::invalid_argument: return QGD_ERR_INVALID;
        case Errc::io: return QGD_ERR_IO;
        case Errc::numerical: return QGD_ERR_NUMERICAL;
        case Errc::validation: return QGD_ERR_VALIDATION;
    }
    return QGD_ERR_INTERNAL;
}

template <typename Fn>
qgd_status guarded(Fn&& fn) {
    try {
        fn();
        return QGD_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QGD_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return QGD_ERR_INTERNAL;
    }
}

}  // namespace

struct qgd_config {
    RunConfig cfg;
};

struct qgd_operator_set {
    OperatorSet ops;
};

extern "C" {

const char* qgd_version(void) { return "0.1.0"; }

const char* qgd_last_error(void) { return g_last_error.c_str(); }

qgd_status qgd_config_create(qgd_config** out) {
    if (!out) {
        g_last_error = "qgd_config_create: out is NULL";
        return QGD_ERR_INVALID;
    }
    return guarded([&] { *out = new qgd_config{default_run_config()}; });
}

qgd_status qgd_config_load(const char* path, qgd_config** out) {
    if (!path || !out) {
        g_last_error = "qgd_config_load: NULL argument";
        return QGD_ERR_INVALID;
    }
    return guarded([&] { *out = new qgd_config{load_run_config(path)}; });
}

qgd_status qgd_config_parse(const char* json, qgd_config** out) {
    if (!json || !out) {
        g_last_error = "qgd_config_parse: NULL argument";
        return QGD_ERR_INVALID;
    }
    return guarded([&] { *out = new qgd_config{parse_run_config(json, "<string>")}; });
}

qgd_status qgd_config_set(qgd_config* cfg, const char* dotted_key, const char* json_value) {
    if (!cfg || !dotted_key || !json_value) {
        g_last_error = "qgd_config_set: NULL argument";
        return QGD_ERR_INVALID;
    }
    return guarded([&] { apply_override(cfg->cfg, dotted_key, json_value); });
}

void qgd_config_destroy(qgd_config* cfg) { delete cfg; }

qgd_status qgd_run_features(const qgd_config* cfg) {
    if (!cfg) {
        g_last_error = "qgd_run_features: cfg is NULL";
        return QGD_ERR_INVALID;
    }
    return guarded([&] { run_features(cfg->cfg); });
}

qgd_status qgd_run_score(const qgd_config* cfg) {
    if (!cfg) {
        g_last_error = "qgd_run_score: cfg is NULL";
        return QGD_ERR_INVALID;
    }
    return guarded([&] { run_score(cfg->cfg); });
}

qgd_status qgd_run_evaluate(const qgd_config* cfg) {
    if (!cfg) {
        g_last_error = "qgd_run_evaluate: cfg is NULL";
        return QGD_ERR_INVALID;
    }
    return guarded([&] { run_evaluate(cfg->cfg); });
}

qgd_status qgd_run_walkforward(const qgd_config* cfg) {
    if (!cfg) {
        g_last_error = "qgd_run_walkforward: cfg is NULL";
        return QGD_ERR_INVALID;
    }
    return guarded([&] { run_walkforward(cfg->cfg); });
}

qgd_status qgd_run_overlay(const qgd_config* cfg) {
    if (!cfg) {
        g_last_error = "qgd_run_overlay: cfg is NULL";
        return QGD_ERR_INVALID;
    }
    return guarded([&] { run_overlay(cfg->cfg); });
}

qgd_status qgd_run_validate(const qgd_config* cfg, int* all_passed) {
    if (!cfg) {
        g_last_error = "qgd_run_validate: cfg is NULL";
        return QGD_ERR_INVALID;
    }
    bool ok = false;
    const qgd_status st = guarded([&] { ok = run_validate(cfg->cfg); });
    if (all_passed) *all_passed = ok ? 1 : 0;
    if (st != QGD_OK) return st;
    if (!ok) {
        g_last_error = "validation checks failed, see validation.json";
        return QGD_ERR_VALIDATION;
    }
    return QGD_OK;
}

qgd_status qgd_operator_set_random(int n, int p, uint64_t seed, int seed_offset,
                                   qgd_operator_set** out) {
    if (!out) {
        g_last_error = "qgd_operator_set_random: out is NULL";
        return QGD_ERR_INVALID;
    }
    return guarded([&] { *out = new qgd_operator_set{make_random_operators(n, p, seed, seed_offset)}; });
}

qgd_status qgd_operator_set_scaled_basis(int n, int p, const double* scales, int basis,
                                         qgd_operator_set** out) {
    if (!out || !scales) {
        g_last_error = "qgd_operator_set_scaled_basis: NULL argument";
        return QGD_ERR_INVALID;
    }
    return guarded([&] {
        const std::vector<double> s(scales, scales + p);
        const OperatorMethod m = basis == 1 ? OperatorMethod::pauli : OperatorMethod::pca_inspired;
        *out = new qgd_operator_set{make_scaled_basis_operators(n, p, s, m)};
    });
}

void qgd_operator_set_destroy(qgd_operator_set* ops) { delete ops; }

qgd_status qgd_ground_state(const qgd_operator_set* ops, const double* x, int p, double* e0,
                            double* gap, int* degenerate, double* state_re, double* state_im) {
    if (!ops || !x) {
        g_last_error = "qgd_ground_state: NULL argument";
        return QGD_ERR_INVALID;
    }
    return guarded([&] {
        if (p != ops->ops.p) throw Error(Errc::invalid_argument, "qgd_ground_state: p mismatch");
        const GroundStateRecord rec = ground_state(ops->ops, std::vector<double>(x, x + p));
        if (e0) *e0 = rec.e0;
        if (gap) *gap = rec.gap;
        if (degenerate) *degenerate = rec.degenerate ? 1 : 0;
        if (state_re)
            for (int i = 0; i < ops->ops.n; ++i) state_re[i] = rec.state[i].real();
        if (state_im)
            for (int i = 0; i < ops->ops.n; ++i) state_im[i] = rec.state[i].imag();
    });
}

qgd_status qgd_berry_curvature(const qgd_operator_set* ops, const double* x, int p, double eps,
                               int a, int b, double* f_ab) {
    if (!ops || !x || !f_ab) {
        g_last_error = "qgd_berry_curvature: NULL argument";
        return QGD_ERR_INVALID;
    }
    return guarded([&] {
        if (p != ops->ops.p) throw Error(Errc::invalid_argument, "qgd_berry_curvature: p mismatch");
        if (a < 0 || b < 0 || a >= p || b >= p || a == b)
            throw Error(Errc::invalid_argument, "qgd_berry_curvature: bad index pair");
        *f_ab = berry_plaquette(ops->ops, std::vector<double>(x, x + p), eps, a, b).f_ab;
    });
}

qgd_status qgd_quantum_metric(const qgd_operator_set* ops, const double* x, int p, int method,
                              double eps, double* g) {
    if (!ops || !x || !g) {
        g_last_error = "qgd_quantum_metric: NULL argument";
        return QGD_ERR_INVALID;
    }
    return guarded([&] {
        if (p != ops->ops.p) throw Error(Errc::invalid_argument, "qgd_quantum_metric: p mismatch");
        const std::vector<double> point(x, x + p);
        const MetricTensor mt =
            method == 1 ? metric_fd(ops->ops, point, eps) : metric_pt(ops->ops, point);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) g[i * p + j] = mt.g(i, j);
    });
}

}  // extern "C"
