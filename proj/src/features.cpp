#include "features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "csv.hpp"

namespace qgd {

int PricePanel::index_on_or_after(Date d) const {
    auto it = std::lower_bound(calendar.begin(), calendar.end(), d);
    if (it == calendar.end()) return -1;
    return static_cast<int>(it - calendar.begin());
}

int PricePanel::index_on_or_before(Date d) const {
    auto it = std::upper_bound(calendar.begin(), calendar.end(), d);
    if (it == calendar.begin()) return -1;
    return static_cast<int>(it - calendar.begin()) - 1;
}

PricePanel load_ohlcv(const std::vector<std::pair<std::string, std::string>>& name_paths) {
    if (name_paths.size() < 2)
        throw Error(Errc::invalid_argument, "load_ohlcv: need at least 2 assets");

    struct Row {
        double close, adj;
    };
    std::vector<std::map<Date, Row>> per_asset;
    for (const auto& [name, path] : name_paths) {
        (void)name;
        const CsvTable t = read_csv(path);
        const int c_date = t.column("Date");
        const int c_close = t.column("Close");
        const int c_adj = t.column("AdjClose");
        if (c_date < 0 || c_close < 0 || c_adj < 0)
            throw Error(Errc::invalid_argument, path + ": header must contain Date,Close,AdjClose");
        std::map<Date, Row> rows;
        for (size_t i = 0; i < t.rows.size(); ++i) {
            const size_t line = i + 2;
            const auto& r = t.rows[i];
            Date d;
            try {
                d = parse_date(r[c_date]);
            } catch (const Error& e) {
                throw Error(Errc::invalid_argument, path + ":" + std::to_string(line) + ": " + e.what());
            }
            const double close = parse_number(r[c_close], path, line);
            const double adj = parse_number(r[c_adj], path, line);
            if (std::isnan(close) || std::isnan(adj)) continue;  // missing close drops the date
            rows[d] = Row{close, adj};
        }
        per_asset.push_back(std::move(rows));
    }

    // intersection calendar
    std::vector<Date> calendar;
    for (const auto& [d, row] : per_asset[0]) {
        (void)row;
        bool everywhere = true;
        for (size_t a = 1; a < per_asset.size() && everywhere; ++a)
            everywhere = per_asset[a].count(d) > 0;
        if (everywhere) calendar.push_back(d);
    }
    if (calendar.size() < 300)
        throw Error(Errc::invalid_argument,
                    "load_ohlcv: insufficient history, only " + std::to_string(calendar.size()) +
                        " common dates (need >= 300)");

    PricePanel panel;
    panel.calendar = calendar;
    for (size_t a = 0; a < per_asset.size(); ++a) {
        panel.asset_names.push_back(name_paths[a].first);
        std::vector<double> adj(calendar.size()), close(calendar.size());
        for (size_t i = 0; i < calendar.size(); ++i) {
            const Row& r = per_asset[a].at(calendar[i]);
            adj[i] = r.adj;
            close[i] = r.close;
        }
        panel.adj_close.push_back(std::move(adj));
        panel.close.push_back(std::move(close));
    }
    return panel;
}

namespace {

double window_mean(const std::vector<double>& v, int t, int w) {
    double s = 0.0;
    for (int i = t - w + 1; i <= t; ++i) s += v[i];
    return s / w;
}

double window_std(const std::vector<double>& v, int t, int w) {
    const double m = window_mean(v, t, w);
    double s = 0.0;
    for (int i = t - w + 1; i <= t; ++i) s += (v[i] - m) * (v[i] - m);
    return std::sqrt(s / (w - 1));
}

double window_corr(const std::vector<double>& a, const std::vector<double>& b, int t, int w) {
    const double ma = window_mean(a, t, w), mb = window_mean(b, t, w);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (int i = t - w + 1; i <= t; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa < 1e-24 || sbb < 1e-24) return 0.0;  // degenerate window
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

FeatureMatrix raw_features(const PricePanel& panel) {
    if (panel.asset_names.size() != 2)
        throw Error(Errc::invalid_argument, "raw_features: the 13-column layout needs exactly 2 assets");
    const int t_len = panel.size();
    if (t_len < 21) throw Error(Errc::invalid_argument, "raw_features: need at least 21 rows");

    const auto& p0 = panel.adj_close[0];
    const auto& p1 = panel.adj_close[1];
    std::vector<double> r0(t_len, nan_value()), r1(t_len, nan_value()), disp(t_len, nan_value());
    for (int t = 1; t < t_len; ++t) {
        r0[t] = std::log(p0[t] / p0[t - 1]);
        r1[t] = std::log(p1[t] / p1[t - 1]);
        disp[t] = std::abs(r0[t] - r1[t]);
    }

    FeatureMatrix f;
    const std::string a0 = panel.asset_names[0], a1 = panel.asset_names[1];
    f.names = {a0 + "_logret", a1 + "_logret", a0 + "_vol5",  a1 + "_vol5",  a0 + "_vol20",
               a1 + "_vol20",  a0 + "_mom5",   a1 + "_mom5",  a0 + "_mom20", a1 + "_mom20",
               "cross_corr20", "disp_mean5",   "disp_mean20"};
    f.values = RMatrix(t_len, 13);
    f.valid_from = 20;
    for (auto& v : f.values.data()) v = nan_value();

    for (int t = 1; t < t_len; ++t) {
        f.values(t, 0) = r0[t];
        f.values(t, 1) = r1[t];
    }
    for (int t = 5; t < t_len; ++t) {
        f.values(t, 2) = window_std(r0, t, 5);
        f.values(t, 3) = window_std(r1, t, 5);
        f.values(t, 6) = p0[t] / p0[t - 5] - 1.0;
        f.values(t, 7) = p1[t] / p1[t - 5] - 1.0;
        f.values(t, 11) = window_mean(disp, t, 5);
    }
    for (int t = 20; t < t_len; ++t) {
        f.values(t, 4) = window_std(r0, t, 20);
        f.values(t, 5) = window_std(r1, t, 20);
        f.values(t, 8) = p0[t] / p0[t - 20] - 1.0;
        f.values(t, 9) = p1[t] / p1[t - 20] - 1.0;
        f.values(t, 10) = window_corr(r0, r1, t, 20);
        f.values(t, 12) = window_mean(disp, t, 20);
    }
    return f;
}

FeatureMatrix enrich(const FeatureMatrix& raw, int lookback) {
    const int t_len = raw.values.rows();
    const int n_raw = raw.values.cols();
    FeatureMatrix out;
    out.valid_from = raw.valid_from + lookback - 1;
    out.values = RMatrix(t_len, n_raw * 4);
    for (auto& v : out.values.data()) v = nan_value();
    const std::string lb = std::to_string(lookback);
    for (int c = 0; c < n_raw; ++c) {
        out.names.push_back(raw.names[c] + "_rmean" + lb);
        out.names.push_back(raw.names[c] + "_rstd" + lb);
        out.names.push_back(raw.names[c] + "_rmin" + lb);
        out.names.push_back(raw.names[c] + "_rmax" + lb);
    }
    for (int t = out.valid_from; t < t_len; ++t) {
        for (int c = 0; c < n_raw; ++c) {
            bool ok = true;
            double sum = 0.0, mn = 0.0, mx = 0.0;
            for (int i = t - lookback + 1; i <= t && ok; ++i) {
                const double v = raw.values(i, c);
                if (!is_defined(v)) {
                    ok = false;
                    break;
                }
                if (i == t - lookback + 1) {
                    mn = mx = v;
                } else {
                    mn = std::min(mn, v);
                    mx = std::max(mx, v);
                }
                sum += v;
            }
            if (!ok) continue;
            const double mean = sum / lookback;
            double ss = 0.0;
            for (int i = t - lookback + 1; i <= t; ++i) {
                const double d = raw.values(i, c) - mean;
                ss += d * d;
            }
            out.values(t, 4 * c + 0) = mean;
            out.values(t, 4 * c + 1) = std::sqrt(ss / (lookback - 1));
            out.values(t, 4 * c + 2) = mn;
            out.values(t, 4 * c + 3) = mx;
        }
    }
    return out;
}

Preprocessor fit_preprocessor(const FeatureMatrix& features, int cutoff_index, int p) {
    const int f_cols = features.values.cols();
    const int lo = features.valid_from;
    const int hi = std::min(cutoff_index, features.values.rows() - 1);
    const int count = hi - lo + 1;
    if (count < p + 30)
        throw Error(Errc::invalid_argument,
                    "fit_preprocessor: only " + std::to_string(count) + " valid rows before cutoff, need >= " +
                        std::to_string(p + 30));

    Preprocessor prep;
    prep.fitted_through = hi;
    prep.input_valid_from = lo;
    prep.mean.assign(f_cols, 0.0);
    prep.stdev.assign(f_cols, 0.0);
    for (int j = 0; j < f_cols; ++j) {
        double s = 0.0;
        for (int t = lo; t <= hi; ++t) s += features.values(t, j);
        prep.mean[j] = s / count;
        double ss = 0.0;
        for (int t = lo; t <= hi; ++t) {
            const double d = features.values(t, j) - prep.mean[j];
            ss += d * d;
        }
        prep.stdev[j] = std::sqrt(ss / (count - 1));
    }

    // covariance of the standardized training rows
    RMatrix z(count, f_cols);
    for (int t = lo; t <= hi; ++t)
        for (int j = 0; j < f_cols; ++j)
            z(t - lo, j) = (features.values(t, j) - prep.mean[j]) / std::max(prep.stdev[j], 1e-12);
    RMatrix cov(f_cols, f_cols);
    for (int i = 0; i < f_cols; ++i)
        for (int j = i; j < f_cols; ++j) {
            double s = 0.0;
            for (int t = 0; t < count; ++t) s += z(t, i) * z(t, j);
            cov(i, j) = s / (count - 1);
            cov(j, i) = cov(i, j);
        }

    const SymEigenSystem es = eigh_sym(cov);
    int positive = 0;
    for (double l : es.eigenvalues)
        if (l > 1e-12) ++positive;
    if (positive < p)
        throw Error(Errc::numerical, "fit_preprocessor: covariance rank " + std::to_string(positive) +
                                         " below requested p = " + std::to_string(p));

    prep.loadings = RMatrix(f_cols, p);
    prep.eigenvalues.resize(p);
    for (int k = 0; k < p; ++k) {
        const int src = f_cols - 1 - k;  // descending
        prep.eigenvalues[k] = es.eigenvalues[src];
        int best = 0;
        double best_mag = -1.0;
        for (int j = 0; j < f_cols; ++j) {
            const double m = std::abs(es.vectors(j, src));
            if (m > best_mag) {
                best_mag = m;
                best = j;
            }
        }
        const double sign = es.vectors(best, src) >= 0.0 ? 1.0 : -1.0;
        for (int j = 0; j < f_cols; ++j) prep.loadings(j, k) = sign * es.vectors(j, src);
    }
    return prep;
}

EmbeddedSeries transform(const Preprocessor& prep, const FeatureMatrix& features) {
    const int t_len = features.values.rows();
    const int f_cols = features.values.cols();
    const int p = prep.loadings.cols();
    if (f_cols != prep.loadings.rows())
        throw Error(Errc::invalid_argument, "transform: column count differs from the fitted basis");

    EmbeddedSeries e;
    e.x = RMatrix(t_len, p);
    e.defined.assign(t_len, 0);
    for (int t = 0; t < t_len; ++t) {
        bool ok = true;
        for (int j = 0; j < f_cols && ok; ++j) ok = is_defined(features.values(t, j));
        if (!ok) continue;
        std::vector<double> y(p, 0.0);
        for (int j = 0; j < f_cols; ++j) {
            const double zj = (features.values(t, j) - prep.mean[j]) / std::max(prep.stdev[j], 1e-12);
            if (zj == 0.0) continue;
            for (int a = 0; a < p; ++a) y[a] += zj * prep.loadings(j, a);
        }
        double n2 = 0.0;
        for (double v : y) n2 += v * v;
        if (n2 <= 0.0) continue;  // zero row: stays zero, flagged undefined
        const double inv = 1.0 / std::sqrt(n2);
        for (int a = 0; a < p; ++a) e.x(t, a) = y[a] * inv;
        e.defined[t] = 1;
    }
    return e;
}

}  // namespace qgd
