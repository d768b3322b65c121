#pragma once

#include <cstdint>

#include "geometry.hpp"
#include "series.hpp"

namespace qgd {

enum class Channel {
    berry_rate,
    spectral_entropy,
    ham_sensitivity,
    reduced_purity,
    qfi_logdet,
    multilag_fidelity,
    ground_energy,
};

Channel channel_from_string(const std::string& s);
std::string to_string(Channel c);

struct ChannelConfig {
    Channel id = Channel::berry_rate;
    int n = 8;
    int p = 10;
    OperatorMethod method = OperatorMethod::random;
    std::uint64_t seed = 42;
    int seed_offset = 0;
    double eps = 1e-5;
    int lags = 5;       // multilag_fidelity
    int bipartition_a = 2;
    int curv_a = 0, curv_b = 1;
    int w = 10;         // smoothing window for the z-score stage
    int m = 60;         // minimum expanding history
    int sign = +1;      // -1 where crisis lowers the raw value

    void validate() const;
};

// Walk-forward fixed defaults (n=8, p=10, w=10) except Berry, which uses
// its tuned configuration (n=6, p=8, w=15, random operators).
ChannelConfig default_channel_config(Channel c);

// var_psi(dH) = <psi|dH^2|psi> - <psi|dH|psi>^2
double perturbation_variance(const CMatrix& dh, const CVector& psi);

// Shannon entropy of excitation gap weights; NaN when the excitation
// spectrum is entirely degenerate with the ground level.
double spectral_entropy_of(const std::vector<double>& eigenvalues);

RawSeries berry_rate_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig& cfg);
RawSeries spectral_entropy_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig& cfg);
RawSeries ham_sensitivity_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig& cfg);
RawSeries reduced_purity_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig& cfg);
RawSeries qfi_logdet_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig& cfg);
RawSeries multilag_fidelity_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig& cfg);
RawSeries ground_energy_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig& cfg);

RawSeries compute_raw_series(const OperatorSet& ops, const EmbeddedSeries& e, const ChannelConfig& cfg);

}  // namespace qgd
