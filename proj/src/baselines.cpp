#include "baselines.hpp"

#include <cmath>

namespace qgd {

namespace {

std::vector<double> log_returns(const std::vector<double>& prices) {
    std::vector<double> r(prices.size(), nan_value());
    for (size_t t = 1; t < prices.size(); ++t) r[t] = std::log(prices[t] / prices[t - 1]);
    return r;
}

}  // namespace

ScoreSeries rolling_vol_z(const std::vector<double>& returns, int vol_window, int m) {
    const int t_len = static_cast<int>(returns.size());
    std::vector<double> vol(t_len, nan_value());
    for (int t = 0; t < t_len; ++t) {
        if (t - vol_window + 1 < 0) continue;
        double sum = 0.0;
        bool ok = true;
        for (int i = t - vol_window + 1; i <= t; ++i) {
            if (!is_defined(returns[i])) {
                ok = false;
                break;
            }
            sum += returns[i];
        }
        if (!ok) continue;
        const double mean = sum / vol_window;
        double ss = 0.0;
        for (int i = t - vol_window + 1; i <= t; ++i) ss += (returns[i] - mean) * (returns[i] - mean);
        vol[t] = std::sqrt(ss / (vol_window - 1));
    }
    ScoreSeries s = causal_zscore(vol, 1, m, "rolling_vol_z");
    return s;
}

ScoreSeries cusum(const std::vector<double>& series, double k, int burn_in) {
    const int t_len = static_cast<int>(series.size());
    if (t_len <= burn_in) throw Error(Errc::invalid_argument, "cusum: series shorter than burn-in");

    double sum = 0.0, sumsq = 0.0;
    int count = 0;
    for (int t = 0; t < burn_in; ++t) {
        if (!is_defined(series[t])) continue;
        sum += series[t];
        sumsq += series[t] * series[t];
        ++count;
    }
    if (count < 10) throw Error(Errc::invalid_argument, "cusum: too few defined burn-in points");
    const double mu = sum / count;
    const double var = std::max(0.0, (sumsq - sum * sum / count) / (count - 1));
    const double sigma = std::sqrt(var);

    std::vector<double> stat(t_len, nan_value());
    double s = 0.0;
    for (int t = burn_in; t < t_len; ++t) {
        double u = 0.0;
        if (is_defined(series[t])) {
            if (sigma < 1e-12)
                u = std::abs(series[t] - mu) <= 1e-12 * std::max(1.0, std::abs(mu)) ? 0.0 : 10.0;
            else
                u = std::abs((series[t] - mu) / sigma);
        }
        s = std::max(0.0, s + u - k);
        stat[t] = s;
    }
    return causal_zscore(stat, 1, 60, "cusum");
}

ScoreSeries absorption_ratio(const RMatrix& returns, int corr_window) {
    const int t_len = returns.rows();
    const int n_assets = returns.cols();
    if (n_assets < 2) throw Error(Errc::invalid_argument, "absorption_ratio: need >= 2 assets");
    std::vector<double> ar(t_len, nan_value());

    for (int t = corr_window; t < t_len; ++t) {
        bool ok = true;
        std::vector<double> mean(n_assets, 0.0);
        for (int a = 0; a < n_assets && ok; ++a)
            for (int i = t - corr_window + 1; i <= t; ++i) {
                const double v = returns(i, a);
                if (!is_defined(v)) {
                    ok = false;
                    break;
                }
                mean[a] += v;
            }
        if (!ok) continue;
        for (auto& mv : mean) mv /= corr_window;

        RMatrix cov(n_assets, n_assets);
        for (int a = 0; a < n_assets; ++a)
            for (int b = a; b < n_assets; ++b) {
                double s = 0.0;
                for (int i = t - corr_window + 1; i <= t; ++i)
                    s += (returns(i, a) - mean[a]) * (returns(i, b) - mean[b]);
                cov(a, b) = s / (corr_window - 1);
                cov(b, a) = cov(a, b);
            }
        bool degenerate = false;
        for (int a = 0; a < n_assets; ++a)
            if (cov(a, a) < 1e-18) degenerate = true;
        if (degenerate) continue;  // zero-variance asset: window skipped

        RMatrix corr(n_assets, n_assets);
        for (int a = 0; a < n_assets; ++a)
            for (int b = 0; b < n_assets; ++b)
                corr(a, b) = cov(a, b) / std::sqrt(cov(a, a) * cov(b, b));
        const SymEigenSystem es = eigh_sym(corr);
        ar[t] = es.eigenvalues.back() / n_assets;  // trace of a correlation matrix is n
    }
    return causal_zscore(ar, 1, 60, "absorption_ratio");
}

ScoreSeries turbulence(const FeatureMatrix& features, int min_history) {
    const int t_len = features.values.rows();
    const int f_cols = features.values.cols();
    std::vector<double> d(t_len, nan_value());

    std::vector<double> sum(f_cols, 0.0);
    RMatrix sxx(f_cols, f_cols);
    long count = 0;
    for (int t = features.valid_from; t < t_len; ++t) {
        bool ok = true;
        for (int j = 0; j < f_cols && ok; ++j) ok = is_defined(features.values(t, j));
        if (ok && count >= min_history) {
            std::vector<double> delta(f_cols);
            for (int j = 0; j < f_cols; ++j) delta[j] = features.values(t, j) - sum[j] / count;
            RMatrix cov(f_cols, f_cols);
            double tr = 0.0;
            for (int i = 0; i < f_cols; ++i)
                for (int j = i; j < f_cols; ++j) {
                    const double c = (sxx(i, j) - sum[i] * sum[j] / count) / (count - 1);
                    cov(i, j) = c;
                    cov(j, i) = c;
                    if (i == j) tr += c;
                }
            const double ridge = 1e-6 * tr / f_cols;
            for (int i = 0; i < f_cols; ++i) cov(i, i) += ridge;
            const std::vector<double> sol = cholesky_solve(cov, delta);
            double dist = 0.0;
            for (int j = 0; j < f_cols; ++j) dist += delta[j] * sol[j];
            d[t] = dist;
        }
        if (ok) {
            for (int i = 0; i < f_cols; ++i) {
                sum[i] += features.values(t, i);
                for (int j = i; j < f_cols; ++j) {
                    sxx(i, j) += features.values(t, i) * features.values(t, j);
                    if (i != j) sxx(j, i) = sxx(i, j);
                }
            }
            ++count;
        }
    }
    return causal_zscore(d, 1, 60, "turbulence");
}

ScoreSeries run_baseline(const BaselineConfig& cfg, const PricePanel& panel,
                         const FeatureMatrix& enriched) {
    if (cfg.method == "rolling_vol_z") {
        ScoreSeries s = rolling_vol_z(log_returns(panel.adj_close[0]), cfg.vol_window, cfg.m);
        return s;
    }
    if (cfg.method == "cusum")
        return cusum(log_returns(panel.adj_close[0]), cfg.cusum_k, cfg.burn_in);
    if (cfg.method == "absorption_ratio") {
        const int n_assets = static_cast<int>(panel.adj_close.size());
        RMatrix r(panel.size(), n_assets);
        for (auto& v : r.data()) v = nan_value();
        for (int a = 0; a < n_assets; ++a) {
            const auto lr = log_returns(panel.adj_close[a]);
            for (int t = 0; t < panel.size(); ++t) r(t, a) = lr[t];
        }
        return absorption_ratio(r, cfg.corr_window);
    }
    if (cfg.method == "turbulence") return turbulence(enriched, cfg.min_history);
    throw Error(Errc::invalid_argument, "unknown baseline method: " + cfg.method);
}

}  // namespace qgd
