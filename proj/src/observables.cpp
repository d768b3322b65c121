#include "observables.hpp"

#include <cmath>

#include "parallel.hpp"

namespace qgd {

Channel channel_from_string(const std::string& s) {
    if (s == "berry_rate") return Channel::berry_rate;
    if (s == "spectral_entropy") return Channel::spectral_entropy;
    if (s == "ham_sensitivity") return Channel::ham_sensitivity;
    if (s == "reduced_purity") return Channel::reduced_purity;
    if (s == "qfi_logdet") return Channel::qfi_logdet;
    if (s == "multilag_fidelity") return Channel::multilag_fidelity;
    if (s == "ground_energy") return Channel::ground_energy;
    throw Error(Errc::invalid_argument, "unknown channel: " + s);
}

std::string to_string(Channel c) {
    switch (c) {
        case Channel::berry_rate: return "berry_rate";
        case Channel::spectral_entropy: return "spectral_entropy";
        case Channel::ham_sensitivity: return "ham_sensitivity";
        case Channel::reduced_purity: return "reduced_purity";
        case Channel::qfi_logdet: return "qfi_logdet";
        case Channel::multilag_fidelity: return "multilag_fidelity";
        case Channel::ground_energy: return "ground_energy";
    }
    return "?";
}

void ChannelConfig::validate() const {
    if (n < 2) throw Error(Errc::invalid_argument, "channel config: n must be >= 2");
    if (p < 1) throw Error(Errc::invalid_argument, "channel config: p must be >= 1");
    if (id == Channel::reduced_purity) {
        if (bipartition_a < 2 || n % bipartition_a != 0)
            throw Error(Errc::invalid_argument, "reduced_purity: bipartition must divide n");
    }
    if (id == Channel::multilag_fidelity && lags < 1)
        throw Error(Errc::invalid_argument, "multilag_fidelity: lags must be >= 1");
    if (id == Channel::berry_rate && (curv_a == curv_b || curv_a >= p || curv_b >= p))
        throw Error(Errc::invalid_argument, "berry_rate: bad curvature index pair");
}

ChannelConfig default_channel_config(Channel c) {
    ChannelConfig cfg;
    cfg.id = c;
    switch (c) {
        case Channel::berry_rate:
            cfg.n = 6;
            cfg.p = 8;
            cfg.w = 15;
            cfg.method = OperatorMethod::random;
            break;
        case Channel::reduced_purity:
            cfg.sign = -1;
            break;
        case Channel::multilag_fidelity:
            cfg.sign = -1;
            break;
        default:
            break;
    }
    cfg.validate();
    return cfg;
}

double perturbation_variance(const CMatrix& dh, const CVector& psi) {
    const CVector w = matvec(dh, psi);
    double second = 0.0;
    for (const auto& v : w) second += std::norm(v);
    const double first = inner(psi, w).real();
    return second - first * first;
}

double spectral_entropy_of(const std::vector<double>& eigenvalues) {
    const size_t n = eigenvalues.size();
    double total = 0.0;
    for (size_t m = 1; m < n; ++m) total += eigenvalues[m] - eigenvalues[0];
    if (total < 1e-12) return nan_value();
    double s = 0.0;
    for (size_t m = 1; m < n; ++m) {
        const double w = (eigenvalues[m] - eigenvalues[0]) / total;
        if (w > 0.0) s -= w * std::log(w);
    }
    return s;
}

namespace {

// ground states for every defined row; NaN rows stay empty
std::vector<CVector> solve_states(const OperatorSet& ops, const EmbeddedSeries& e) {
    std::vector<CVector> states(e.size());
    parallel_for(e.size(), [&](int t) {
        if (!e.defined[t]) return;
        states[t] = ground_state(ops, e.row(t)).state;
    });
    return states;
}

}  // namespace

RawSeries berry_rate_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig& cfg) {
    RawSeries out{to_string(Channel::berry_rate), std::vector<double>(e.size(), nan_value())};
    std::vector<double> f(e.size(), nan_value());
    const StateField field = field_from_operators(ops);
    parallel_for(e.size(), [&](int t) {
        if (!e.defined[t]) return;
        try {
            f[t] = berry_plaquette(field, e.row(t), cfg.eps, cfg.curv_a, cfg.curv_b).f_ab;
        } catch (const Error&) {
            // ill-conditioned loop at this step: flagged, not fatal
        }
    });
    for (int t = 1; t < e.size(); ++t)
        if (is_defined(f[t]) && is_defined(f[t - 1])) out.values[t] = std::abs(f[t] - f[t - 1]);
    return out;
}

RawSeries spectral_entropy_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig&) {
    RawSeries out{to_string(Channel::spectral_entropy), std::vector<double>(e.size(), nan_value())};
    parallel_for(e.size(), [&](int t) {
        if (!e.defined[t]) return;
        out.values[t] = spectral_entropy_of(ground_spectrum(ops, e.row(t)).eigenvalues);
    });
    return out;
}

RawSeries ham_sensitivity_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig&) {
    RawSeries out{to_string(Channel::ham_sensitivity), std::vector<double>(e.size(), nan_value())};
    parallel_for(e.size() - 1, [&](int i) {
        const int t = i + 1;
        if (!e.defined[t] || !e.defined[t - 1]) return;
        const CMatrix dh = error_hamiltonian(ops, e.row(t)) - error_hamiltonian(ops, e.row(t - 1));
        const CVector psi = ground_state(ops, e.row(t)).state;
        out.values[t] = perturbation_variance(dh, psi);
    });
    return out;
}

RawSeries reduced_purity_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig& cfg) {
    if (ops.n % cfg.bipartition_a != 0)
        throw Error(Errc::invalid_argument, "reduced_purity: bipartition does not divide n");
    const int d_a = cfg.bipartition_a;
    const int d_b = ops.n / d_a;
    RawSeries out{to_string(Channel::reduced_purity), std::vector<double>(e.size(), nan_value())};
    parallel_for(e.size(), [&](int t) {
        if (!e.defined[t]) return;
        const CVector psi = ground_state(ops, e.row(t)).state;
        out.values[t] = purity(partial_trace(psi, d_a, d_b));
    });
    return out;
}

RawSeries qfi_logdet_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig&) {
    RawSeries out{to_string(Channel::qfi_logdet), std::vector<double>(e.size(), nan_value())};
    parallel_for(e.size(), [&](int t) {
        if (!e.defined[t]) return;
        try {
            MetricTensor mt = metric_pt(ops, e.row(t));
            for (auto& v : mt.g.data()) v *= 4.0;
            const PseudoDet pd = pseudo_det(mt.g);
            if (!pd.flagged) out.values[t] = std::log(pd.value);
        } catch (const Error&) {
            // degenerate point: flagged, not fatal
        }
    });
    return out;
}

RawSeries multilag_fidelity_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig& cfg) {
    const int k = cfg.lags;
    RawSeries out{to_string(Channel::multilag_fidelity), std::vector<double>(e.size(), nan_value())};
    const std::vector<CVector> states = solve_states(ops, e);
    for (int t = k; t < e.size(); ++t) {
        bool ok = !states[t].empty();
        for (int l = 1; ok && l <= k; ++l) ok = !states[t - l].empty();
        if (!ok) continue;
        double best = 1.0;
        for (int l = 1; l <= k; ++l) {
            const double f = std::norm(inner(states[t], states[t - l]));
            best = std::min(best, f);
        }
        out.values[t] = best;
    }
    return out;
}

RawSeries ground_energy_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig&) {
    RawSeries out{to_string(Channel::ground_energy), std::vector<double>(e.size(), nan_value())};
    parallel_for(e.size(), [&](int t) {
        if (!e.defined[t]) return;
        out.values[t] = ground_state(ops, e.row(t)).e0;
    });
    return out;
}

RawSeries compute_raw_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig& cfg) {
    switch (cfg.id) {
        case Channel::berry_rate: return berry_rate_series(ops, e, cfg);
        case Channel::spectral_entropy: return spectral_entropy_series(ops, e, cfg);
        case Channel::ham_sensitivity: return ham_sensitivity_series(ops, e, cfg);
        case Channel::reduced_purity: return reduced_purity_series(ops, e, cfg);
        case Channel::qfi_logdet: return qfi_logdet_series(ops, e, cfg);
        case Channel::multilag_fidelity: return multilag_fidelity_series(ops, e, cfg);
        case Channel::ground_energy: return ground_energy_series(ops, e, cfg);
    }
    throw Error(Errc::invalid_argument, "unknown channel id");
}

}  // namespace qgd
