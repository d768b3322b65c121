#include "evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace qgd {

std::vector<CrisisWindow> load_crises(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open crisis file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(Errc::invalid_argument, path + ": " + e.what());
    }
    if (!j.contains("crises") || !j["crises"].is_array() || j["crises"].empty())
        throw Error(Errc::invalid_argument, path + ": expected a non-empty 'crises' array");
    std::vector<CrisisWindow> out;
    for (const auto& c : j["crises"]) {
        CrisisWindow w;
        w.name = c.at("name").get<std::string>();
        w.start = parse_date(c.at("start").get<std::string>());
        w.end = parse_date(c.at("end").get<std::string>());
        w.category = c.value("category", "Conventional");
        if (w.start >= w.end)
            throw Error(Errc::invalid_argument, path + ": crisis '" + w.name + "' has start >= end");
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<CrisisWindow> builtin_crises() {
    auto mk = [](const char* name, const char* start, const char* end, const char* cat) {
        return CrisisWindow{name, parse_date(start), parse_date(end), cat};
    };
    return {
        mk("1998 LTCM Crisis", "1998-08-01", "1998-12-31", "Conventional"),
        mk("2000 Dot-com Bust", "2000-03-01", "2000-12-31", "Conventional"),
        mk("2001 September 11", "2001-09-01", "2001-10-31", "Conventional"),
        mk("2007 Quant Meltdown", "2007-08-01", "2007-09-30", "Conventional"),
        mk("2008 GFC", "2008-09-01", "2009-03-31", "Conventional"),
        mk("2010 Flash Crash", "2010-05-01", "2010-06-30", "Conventional"),
        mk("2011 Euro Crisis", "2011-07-01", "2011-10-31", "Conventional"),
        mk("2013 Taper Tantrum", "2013-05-01", "2013-07-31", "Conventional"),
        mk("2015 China Crash", "2015-07-01", "2015-09-30", "Conventional"),
        mk("2020 COVID", "2020-02-01", "2020-04-30", "Conventional"),
        mk("2016 Brexit", "2016-06-01", "2016-07-31", "Novel"),
        mk("2018 Volmageddon", "2018-01-01", "2018-04-30", "Novel"),
        mk("2018 Q4 Selloff", "2018-10-01", "2018-12-31", "Novel"),
        mk("2019 Repo Crisis", "2019-09-01", "2019-10-31", "Novel"),
        mk("2021 Meme/Archegos", "2021-01-01", "2021-04-30", "Novel"),
        mk("2022 Rate Hikes", "2022-01-01", "2022-10-31", "Novel"),
        mk("2023 SVB", "2023-03-01", "2023-04-30", "Novel"),
        mk("2024 Carry Unwind", "2024-07-01", "2024-08-31", "Novel"),
    };
}

CrisisSpan crisis_span(const PricePanel& panel, const CrisisWindow& cw, int extension_days) {
    CrisisSpan s;
    const int t_len = panel.size();
    int start_idx = panel.index_on_or_after(cw.start);
    int end_idx = panel.index_on_or_before(cw.end);
    if (start_idx < 0 || end_idx < 0 || end_idx < start_idx) {
        s.first = 0;
        s.last = -1;  // window outside the calendar
        s.start_idx = start_idx < 0 ? t_len : start_idx;
        return s;
    }
    s.start_idx = start_idx;
    s.first = std::max(0, start_idx - extension_days);
    s.last = std::min(t_len - 1, end_idx + extension_days);
    return s;
}

bool in_any_span(int t, const std::vector<CrisisSpan>& spans) {
    for (const auto& s : spans)
        if (t >= s.first && t <= s.last) return true;
    return false;
}

OperatorSet build_operators(const ChannelConfig& cfg, const std::vector<double>& pca_eigenvalues) {
    if (cfg.method == OperatorMethod::random)
        return make_random_operators(cfg.n, cfg.p, cfg.seed, cfg.seed_offset);
    std::vector<double> scales(pca_eigenvalues.begin(), pca_eigenvalues.end());
    if (static_cast<int>(scales.size()) < cfg.p)
        throw Error(Errc::invalid_argument, "build_operators: fewer PCA eigenvalues than operators");
    for (auto& s : scales) s = std::max(s, 0.0);
    return make_scaled_basis_operators(cfg.n, cfg.p, scales, cfg.method);
}

ScoreSeries channel_score(const FeatureMatrix& enriched, const ChannelConfig& cfg, int fit_idx) {
    cfg.validate();
    const Preprocessor prep = fit_preprocessor(enriched, fit_idx, cfg.p);
    const EmbeddedSeries embedded = transform(prep, enriched);
    const OperatorSet ops = build_operators(cfg, prep.eigenvalues);
    const RawSeries raw = compute_raw_series(ops, embedded, cfg);
    ScoreSeries s = causal_zscore(raw.values, cfg.w, cfg.m, to_string(cfg.id));
    if (cfg.sign < 0)
        for (auto& z : s.z) z = -z;
    return s;
}

namespace {

ScoreSeries method_score_full(const MethodSpec& spec, const PricePanel& panel,
                              const FeatureMatrix& enriched, int fit_idx) {
    switch (spec.kind) {
        case MethodSpec::Kind::channel:
            return channel_score(enriched, spec.channel, fit_idx);
        case MethodSpec::Kind::baseline: {
            ScoreSeries s = run_baseline(spec.baseline, panel, enriched);
            s.name = spec.name;
            return s;
        }
        case MethodSpec::Kind::imported: {
            ScoreSeries s;
            s.name = spec.name;
            s.raw = spec.imported_z;
            s.smoothed = spec.imported_z;
            s.z = spec.imported_z;
            return s;
        }
    }
    throw Error(Errc::invalid_argument, "unknown method kind");
}

std::vector<double> collect(const std::vector<double>& z, int first, int last) {
    std::vector<double> out;
    for (int t = std::max(0, first); t <= last && t < static_cast<int>(z.size()); ++t)
        if (is_defined(z[t])) out.push_back(z[t]);
    return out;
}

std::vector<double> collect_normal(const std::vector<double>& z, const std::vector<CrisisSpan>& spans) {
    std::vector<double> out;
    for (int t = 0; t < static_cast<int>(z.size()); ++t)
        if (is_defined(z[t]) && !in_any_span(t, spans)) out.push_back(z[t]);
    return out;
}

}  // namespace

EvalReport crisis_separability(const PricePanel& panel, const FeatureMatrix& enriched,
                               const std::vector<MethodSpec>& methods,
                               const std::vector<CrisisWindow>& crises, const EvalOptions& opts) {
    EvalReport report;
    for (const auto& m : methods) report.methods.push_back(m.name);
    for (const auto& c : crises) report.crises.push_back(c.name);

    std::vector<CrisisSpan> all_spans;
    for (const auto& c : crises) all_spans.push_back(crisis_span(panel, c, opts.extension_days));

    for (const auto& spec : methods) {
        // per-crisis refit only matters for channels; causal baselines and
        // imported scores are fixed series
        ScoreSeries fixed_score;
        if (spec.kind != MethodSpec::Kind::channel)
            fixed_score = method_score_full(spec, panel, enriched, 0);

        std::vector<EffectSizeResult> row(crises.size());
        parallel_for(static_cast<int>(crises.size()), [&](int ci_int) {
            const size_t ci = static_cast<size_t>(ci_int);
            EffectSizeResult cell;
            cell.method = spec.name;
            cell.crisis = crises[ci].name;
            const CrisisSpan& span = all_spans[ci];
            if (span.last < span.first) {
                cell.skipped = true;
                cell.note = "window outside calendar";
                row[ci] = std::move(cell);
                return;
            }
            try {
                const ScoreSeries* score = &fixed_score;
                ScoreSeries refit;
                if (spec.kind == MethodSpec::Kind::channel) {
                    const Date cutoff = add_calendar_days(crises[ci].start, -opts.cutoff_calendar_days);
                    const int cutoff_idx = panel.index_on_or_before(cutoff);
                    if (cutoff_idx < 0) throw Error(Errc::invalid_argument, "no pre-crisis history");
                    refit = channel_score(enriched, spec.channel, cutoff_idx);
                    score = &refit;
                }
                const std::vector<double> crisis_sample = collect(score->z, span.first, span.last);
                const std::vector<double> normal_sample = collect_normal(score->z, all_spans);
                cell.n_crisis = static_cast<int>(crisis_sample.size());
                cell.n_normal = static_cast<int>(normal_sample.size());
                if (cell.n_crisis < 2 || cell.n_normal < 2)
                    throw Error(Errc::invalid_argument, "too few defined score points");

                const double d = cohens_d(crisis_sample, normal_sample);
                if (!is_defined(d)) {
                    // constant score: no separation when the means agree
                    if (std::abs(mean_of(crisis_sample) - mean_of(normal_sample)) <= 1e-12) {
                        cell.defined = true;
                        cell.d = 0.0;
                        cell.delta = cliffs_delta(crisis_sample, normal_sample);
                        cell.ci_lo = cell.ci_hi = nan_value();
                        cell.p_welch = 1.0;
                        cell.p_permutation = 1.0;
                        cell.note = "degenerate variance, equal means";
                    } else {
                        cell.defined = false;
                        cell.note = "zero pooled variance";
                    }
                } else {
                    cell.defined = true;
                    cell.d = d;
                    cell.delta = cliffs_delta(crisis_sample, normal_sample);
                    if (cell.n_crisis >= 4 && cell.n_normal >= 4) {
                        const BootstrapCi ci_ = block_bootstrap_ci(crisis_sample, normal_sample,
                                                                   opts.bootstrap_resamples, opts.seed);
                        cell.ci_lo = ci_.lo;
                        cell.ci_hi = ci_.hi;
                    } else {
                        cell.ci_lo = cell.ci_hi = nan_value();
                    }
                    cell.p_welch = welch_t(crisis_sample, normal_sample).p;
                    cell.p_permutation =
                        permutation_test(crisis_sample, normal_sample, opts.n_permutations, opts.seed);
                }
            } catch (const Error& e) {
                cell.skipped = true;
                cell.note = e.what();
            }
            row[ci] = std::move(cell);
        });

        // Holm adjustment across the crisis family of this method
        std::vector<size_t> tested;
        std::vector<double> ps;
        for (size_t i = 0; i < row.size(); ++i)
            if (row[i].defined) {
                tested.push_back(i);
                ps.push_back(row[i].p_welch);
            }
        const std::vector<double> adj = holm_adjust(ps);
        for (size_t i = 0; i < tested.size(); ++i) row[tested[i]].p_welch_holm = adj[i];

        for (auto& cell : row) report.cells.push_back(std::move(cell));
    }

    // per-method median d
    const size_t n_crises = crises.size();
    for (size_t mi = 0; mi < methods.size(); ++mi) {
        std::vector<double> ds;
        for (size_t ci = 0; ci < n_crises; ++ci) {
            const auto& cell = report.cells[mi * n_crises + ci];
            if (cell.defined) ds.push_back(cell.d);
        }
        if (ds.empty()) {
            report.median_d.push_back(nan_value());
            continue;
        }
        std::sort(ds.begin(), ds.end());
        const size_t n = ds.size();
        report.median_d.push_back(n % 2 ? ds[n / 2] : 0.5 * (ds[n / 2 - 1] + ds[n / 2]));
    }

    // ranks over crises where every method has a defined d
    std::vector<size_t> complete;
    for (size_t ci = 0; ci < n_crises; ++ci) {
        bool all = true;
        for (size_t mi = 0; mi < methods.size() && all; ++mi)
            all = report.cells[mi * n_crises + ci].defined;
        if (all) complete.push_back(ci);
    }
    report.n_rank_crises = static_cast<int>(complete.size());
    if (complete.size() >= 2 && methods.size() >= 2) {
        RMatrix d_matrix(static_cast<int>(complete.size()), static_cast<int>(methods.size()));
        for (size_t r = 0; r < complete.size(); ++r)
            for (size_t mi = 0; mi < methods.size(); ++mi)
                d_matrix(static_cast<int>(r), static_cast<int>(mi)) =
                    report.cells[mi * n_crises + complete[r]].d;
        report.friedman = friedman_nemenyi(d_matrix);
        report.mean_ranks = report.friedman.mean_ranks;
    } else {
        report.mean_ranks.assign(methods.size(), nan_value());
    }
    return report;
}

double median_d_for_spans(const std::vector<double>& z, const std::vector<CrisisSpan>& spans) {
    std::vector<double> ds;
    const std::vector<double> normal = collect_normal(z, spans);
    for (const auto& s : spans) {
        if (s.last < s.first) continue;
        const std::vector<double> crisis = collect(z, s.first, s.last);
        if (crisis.size() < 2 || normal.size() < 2) continue;
        const double d = cohens_d(crisis, normal);
        if (is_defined(d)) ds.push_back(d);
    }
    if (ds.empty()) return nan_value();
    std::sort(ds.begin(), ds.end());
    const size_t n = ds.size();
    return n % 2 ? ds[n / 2] : 0.5 * (ds[n / 2 - 1] + ds[n / 2]);
}

std::vector<double> circular_shift(const std::vector<double>& v, int offset) {
    const int n = static_cast<int>(v.size());
    std::vector<double> out(n);
    for (int t = 0; t < n; ++t) out[(t + offset) % n] = v[t];
    return out;
}

NullModelResult null_models(const std::vector<double>& z, const std::vector<CrisisSpan>& spans,
                            int n_draws, std::uint64_t seed) {
    const int t_len = static_cast<int>(z.size());
    NullModelResult out;
    out.real_median_d = median_d_for_spans(z, spans);
    if (!is_defined(out.real_median_d))
        throw Error(Errc::invalid_argument, "null_models: real median d undefined");

    std::vector<int> lengths;
    for (const auto& s : spans)
        if (s.last >= s.first) lengths.push_back(s.last - s.first + 1);

    SplitMix64 shift_rng(SplitMix64::substream(seed, 1));
    for (int i = 0; i < n_draws; ++i) {
        const int offset = 1 + static_cast<int>(shift_rng.below(static_cast<std::uint64_t>(t_len - 1)));
        const double d = median_d_for_spans(circular_shift(z, offset), spans);
        if (is_defined(d)) out.null_shift.push_back(d);
    }

    SplitMix64 window_rng(SplitMix64::substream(seed, 2));
    for (int i = 0; i < n_draws; ++i) {
        std::vector<CrisisSpan> placed;
        for (int len : lengths) {
            bool ok = false;
            for (int attempt = 0; attempt < 10000 && !ok; ++attempt) {
                const int first =
                    static_cast<int>(window_rng.below(static_cast<std::uint64_t>(t_len - len + 1)));
                CrisisSpan cand{first, first + len - 1, first};
                ok = true;
                for (const auto& other : placed)
                    if (!(cand.last < other.first || cand.first > other.last)) {
                        ok = false;
                        break;
                    }
                if (ok) placed.push_back(cand);
            }
            if (!ok) throw Error(Errc::numerical, "null_models: window placement infeasible");
        }
        const double d = median_d_for_spans(z, placed);
        if (is_defined(d)) out.null_windows.push_back(d);
    }

    auto summarize = [&](const std::vector<double>& null_d, double& pct, double& p) {
        int le = 0, ge = 0;
        for (double v : null_d) {
            if (v <= out.real_median_d) ++le;
            if (v >= out.real_median_d) ++ge;
        }
        pct = null_d.empty() ? nan_value() : 100.0 * le / static_cast<double>(null_d.size());
        p = (1.0 + ge) / (static_cast<double>(null_d.size()) + 1.0);
    };
    summarize(out.null_shift, out.percentile_shift, out.p_shift);
    summarize(out.null_windows, out.percentile_windows, out.p_windows);
    return out;
}

namespace {

struct YearSlice {
    int first = -1, last = -1;  // trading-day indices of the evaluation year
};

YearSlice year_slice(const PricePanel& panel, int year) {
    YearSlice s;
    for (int t = 0; t < panel.size(); ++t) {
        if (year_of(panel.calendar[t]) == year) {
            if (s.first < 0) s.first = t;
            s.last = t;
        }
    }
    return s;
}

// stitched raw series: train part fitted through train_end, each month of
// the evaluation year fitted through the last day before that month
std::vector<double> walk_forward_raw(const FeatureMatrix& enriched, const ChannelConfig& cfg,
                                     const PricePanel& panel, int train_end, int year) {
    const int t_len = enriched.values.rows();
    std::vector<double> raw(t_len, nan_value());

    const int margin = cfg.id == Channel::multilag_fidelity ? cfg.lags : 1;

    // training segment
    {
        const Preprocessor prep = fit_preprocessor(enriched, train_end, cfg.p);
        EmbeddedSeries e = transform(prep, enriched);
        for (int t = train_end + 1; t < t_len; ++t) e.defined[t] = 0;
        const OperatorSet ops = build_operators(cfg, prep.eigenvalues);
        const RawSeries r = compute_raw_series(ops, e, cfg);
        for (int t = 0; t <= train_end; ++t) raw[t] = r.values[t];
    }

    // monthly refits inside the evaluation year
    for (int month = 1; month <= 12; ++month) {
        const Date month_start = parse_date(std::to_string(year) + "-" +
                                            (month < 10 ? "0" : "") + std::to_string(month) + "-01");
        const Date next_start = month == 12
                                    ? parse_date(std::to_string(year + 1) + "-01-01")
                                    : parse_date(std::to_string(year) + "-" +
                                                 (month + 1 < 10 ? "0" : "") +
                                                 std::to_string(month + 1) + "-01");
        const int m_first = panel.index_on_or_after(month_start);
        const int m_last = panel.index_on_or_before(add_calendar_days(next_start, -1));
        if (m_first < 0 || m_last < m_first) continue;
        if (year_of(panel.calendar[m_first]) != year) continue;
        const int fit_idx = m_first - 1;

        const Preprocessor prep = fit_preprocessor(enriched, fit_idx, cfg.p);
        EmbeddedSeries e = transform(prep, enriched);
        for (int t = 0; t < t_len; ++t)
            if (t < m_first - margin || t > m_last) e.defined[t] = 0;
        const OperatorSet ops = build_operators(cfg, prep.eigenvalues);
        const RawSeries r = compute_raw_series(ops, e, cfg);
        for (int t = m_first; t <= m_last; ++t) raw[t] = r.values[t];
    }
    return raw;
}

struct GridPoint {
    int n, p, w;
    OperatorMethod method;
};

std::vector<GridPoint> hpo_grid() {
    std::vector<GridPoint> grid;
    for (int n : {4, 8, 16})
        for (int p : {10, 15, 20})
            for (OperatorMethod op : {OperatorMethod::random, OperatorMethod::pca_inspired})
                for (int w : {10, 20, 30}) grid.push_back(GridPoint{n, p, w, op});
    return grid;
}

}  // namespace

WalkForwardReport walk_forward(const PricePanel& panel, const FeatureMatrix& enriched,
                               const std::vector<MethodSpec>& methods,
                               const std::vector<CrisisWindow>& crises,
                               const WalkForwardOptions& opts) {
    WalkForwardReport report;
    const int t_len = panel.size();
    if (t_len == 0) throw Error(Errc::invalid_argument, "walk_forward: empty panel");

    const Date train_start = opts.train_start ? opts.train_start : panel.calendar.front();
    const int train_start_idx = std::max(0, panel.index_on_or_after(train_start));

    std::vector<CrisisSpan> all_spans;
    for (const auto& c : crises) all_spans.push_back(crisis_span(panel, c, opts.extension_days));

    int first_year = opts.first_eval_year;
    if (first_year == 0) {
        const int idx = std::min(t_len - 1, train_start_idx + opts.min_train_days);
        first_year = year_of(panel.calendar[idx]) + 1;
    }
    const int last_year = opts.last_eval_year ? opts.last_eval_year : year_of(panel.calendar.back());

    for (const auto& spec : methods) {
        for (int year = first_year; year <= last_year; ++year) {
            const YearSlice slice = year_slice(panel, year);
            if (slice.first < 0) continue;
            const int train_end = slice.first - 1;
            if (train_end - train_start_idx + 1 < opts.min_train_days) continue;

            WfYearResult yr;
            yr.method = spec.name;
            yr.year = year;
            yr.threshold = nan_value();

            // choose the channel configuration
            ChannelConfig cfg = spec.channel;
            if (spec.kind == MethodSpec::Kind::channel && opts.hpo) {
                std::vector<CrisisSpan> past;
                for (const auto& s : all_spans)
                    if (s.last >= s.first && s.last <= train_end && s.first >= train_start_idx)
                        past.push_back(s);
                if (past.empty()) {
                    yr.hpo_fallback = true;
                    yr.hpo_config = "defaults";
                } else {
                    const std::vector<GridPoint> grid = hpo_grid();
                    std::vector<double> objective(grid.size(),
                                                  -std::numeric_limits<double>::infinity());
                    parallel_for(static_cast<int>(grid.size()), [&](int gi) {
                        ChannelConfig cand = cfg;
                        cand.n = grid[gi].n;
                        cand.p = grid[gi].p;
                        cand.w = grid[gi].w;
                        cand.method = grid[gi].method;
                        if (cand.id == Channel::reduced_purity && cand.n % cand.bipartition_a) return;
                        if (cand.id == Channel::berry_rate &&
                            (cand.curv_a >= cand.p || cand.curv_b >= cand.p))
                            return;
                        try {
                            const ScoreSeries s = channel_score(enriched, cand, train_end);
                            std::vector<double> ds;
                            for (const auto& sp : past) {
                                std::vector<double> cr = collect(s.z, sp.first, sp.last);
                                std::vector<double> nm;
                                for (int t = 0; t <= train_end; ++t)
                                    if (is_defined(s.z[t]) && !in_any_span(t, all_spans))
                                        nm.push_back(s.z[t]);
                                if (cr.size() < 2 || nm.size() < 2) continue;
                                const double d = cohens_d(cr, nm);
                                if (is_defined(d)) ds.push_back(d);
                            }
                            if (ds.empty()) return;
                            const double mean = mean_of(ds);
                            const double sd = ds.size() > 1 ? std::sqrt(sample_variance(ds)) : 0.0;
                            objective[gi] = mean - 0.3 * sd;
                        } catch (const Error&) {
                            // infeasible grid point
                        }
                    });
                    ChannelConfig best_cfg = cfg;
                    double best_obj = -std::numeric_limits<double>::infinity();
                    for (size_t gi = 0; gi < grid.size(); ++gi) {
                        if (objective[gi] > best_obj) {
                            best_obj = objective[gi];
                            best_cfg.n = grid[gi].n;
                            best_cfg.p = grid[gi].p;
                            best_cfg.w = grid[gi].w;
                            best_cfg.method = grid[gi].method;
                        }
                    }
                    cfg = best_cfg;
                    yr.hpo_config = "n=" + std::to_string(cfg.n) + ",p=" + std::to_string(cfg.p) +
                                    ",w=" + std::to_string(cfg.w) + ",op=" + to_string(cfg.method);
                }
            }

            // score through the evaluation year
            ScoreSeries score;
            try {
                if (spec.kind == MethodSpec::Kind::channel) {
                    std::vector<double> raw = walk_forward_raw(enriched, cfg, panel, train_end, year);
                    raw.resize(slice.last + 1);
                    score = causal_zscore(raw, cfg.w, cfg.m, spec.name);
                    if (cfg.sign < 0)
                        for (auto& z : score.z) z = -z;
                } else {
                    score = method_score_full(spec, panel, enriched, train_end);
                    score.raw.resize(slice.last + 1);
                    score.smoothed.resize(slice.last + 1);
                    score.z.resize(slice.last + 1);
                }
            } catch (const Error& e) {
                yr.note = std::string("scoring failed: ") + e.what();
                report.year_results.push_back(yr);
                continue;
            }

            // alarms under the chosen threshold strategy
            std::vector<AlarmEvent> events;
            if (opts.strategy == "fixed") {
                yr.threshold = opts.fixed_tau;
                events = extract_alarms(score.z, opts.fixed_tau);
                for (auto& e : events) e.mechanism = "fixed";
            } else if (opts.strategy == "far") {
                std::vector<double> train_z(score.z.begin(), score.z.begin() + train_end + 1);
                std::vector<std::pair<int, int>> train_spans;
                for (const auto& s : all_spans)
                    if (s.last >= s.first && s.first <= train_end)
                        train_spans.push_back({s.first, std::min(s.last, train_end)});
                double tau;
                try {
                    tau = far_threshold(train_z, train_spans, opts.far_alpha);
                } catch (const Error& e) {
                    tau = opts.fixed_tau;
                    yr.note = std::string("far calibration failed, fixed tau used: ") + e.what();
                }
                yr.threshold = tau;
                events = extract_alarms(score.z, tau);
                for (auto& e : events) e.mechanism = "far";
            } else if (opts.strategy == "adaptive") {
                events = adaptive_alarms(score);
            } else {
                throw Error(Errc::invalid_argument, "unknown threshold strategy: " + opts.strategy);
            }

            std::vector<AlarmEvent> year_events;
            for (const auto& e : events)
                if (e.onset >= slice.first && e.onset <= slice.last) year_events.push_back(e);

            // false alarms on non-crisis days of the year; events are the
            // primary unit, the per-point exceedance rate sits alongside
            int false_alarms = 0;
            int non_crisis_days = 0;
            int exceed_days = 0;
            for (int t = slice.first; t <= slice.last; ++t) {
                if (in_any_span(t, all_spans)) continue;
                ++non_crisis_days;
                if (is_defined(yr.threshold) && is_defined(score.z[t]) && score.z[t] > yr.threshold)
                    ++exceed_days;
            }
            for (const auto& e : year_events)
                if (!in_any_span(e.onset, all_spans)) ++false_alarms;
            yr.n_false_alarms = false_alarms;
            yr.far_events = non_crisis_days > 0
                                ? false_alarms / (static_cast<double>(non_crisis_days) / 252.0)
                                : nan_value();
            yr.exceedance_rate = (non_crisis_days > 0 && is_defined(yr.threshold))
                                     ? static_cast<double>(exceed_days) / non_crisis_days
                                     : nan_value();
            report.year_results.push_back(yr);

            // per-crisis detection
            for (size_t ci = 0; ci < crises.size(); ++ci) {
                const CrisisSpan& s = all_spans[ci];
                if (s.last < s.first) continue;
                const int w_first = std::max(s.first, slice.first);
                const int w_last = std::min(s.last, slice.last);
                if (w_first > w_last) continue;

                WfCrisisResult r;
                r.method = spec.name;
                r.crisis = crises[ci].name;
                r.year = year;
                r.strategy = opts.strategy;
                int first_onset = -1;
                for (const auto& e : year_events)
                    if (e.onset >= w_first && e.onset <= w_last) {
                        first_onset = e.onset;
                        break;
                    }
                r.detected = first_onset >= 0;
                r.delay = r.detected ? std::max(0, first_onset - s.start_idx) : -1;

                std::vector<double> crisis_sample, normal_sample;
                for (int t = slice.first; t <= slice.last; ++t) {
                    if (!is_defined(score.z[t])) continue;
                    if (t >= w_first && t <= w_last)
                        crisis_sample.push_back(score.z[t]);
                    else if (!in_any_span(t, all_spans))
                        normal_sample.push_back(score.z[t]);
                }
                if (crisis_sample.size() >= 2 && normal_sample.size() >= 2) {
                    const double d = cohens_d(crisis_sample, normal_sample);
                    if (is_defined(d)) {
                        r.oos_d = d;
                        r.oos_d_defined = true;
                    }
                }
                report.crisis_results.push_back(r);
            }
        }
    }
    return report;
}

OverlayResult overlay_backtest(const std::vector<double>& prices, const std::vector<double>& z,
                               double tau, int cooldown) {
    const int t_len = static_cast<int>(prices.size());
    if (t_len != static_cast<int>(z.size()))
        throw Error(Errc::invalid_argument, "overlay_backtest: z not aligned to prices");
    if (t_len < 2) throw Error(Errc::invalid_argument, "overlay_backtest: need at least 2 days");

    OverlayResult out;
    double equity = 1.0, bh_equity = 1.0;
    double peak = 1.0, bh_peak = 1.0;
    double sum = 0.0, sumsq = 0.0, bh_sum = 0.0, bh_sumsq = 0.0;
    int cash_days = 0;
    int cash_until = -1;

    for (int t = 1; t < t_len; ++t) {
        if (t > cash_until && is_defined(z[t - 1]) && z[t - 1] > tau) {
            cash_until = t + cooldown - 1;
            out.n_exits += 1;
        }
        const bool in_cash = t <= cash_until;
        const double r = prices[t] / prices[t - 1] - 1.0;
        const double sr = in_cash ? 0.0 : r;
        if (in_cash) ++cash_days;

        equity *= 1.0 + sr;
        bh_equity *= 1.0 + r;
        peak = std::max(peak, equity);
        bh_peak = std::max(bh_peak, bh_equity);
        out.max_drawdown = std::min(out.max_drawdown, equity / peak - 1.0);
        out.bh_max_drawdown = std::min(out.bh_max_drawdown, bh_equity / bh_peak - 1.0);
        sum += sr;
        sumsq += sr * sr;
        bh_sum += r;
        bh_sumsq += r * r;
    }

    const double n = t_len - 1;
    auto sharpe = [&](double s, double ss) {
        const double mean = s / n;
        const double var = std::max(0.0, (ss - s * s / n) / (n - 1.0));
        if (var < 1e-30) return 0.0;
        return mean / std::sqrt(var) * std::sqrt(252.0);
    };
    out.total_return = equity - 1.0;
    out.bh_total_return = bh_equity - 1.0;
    out.annualized_sharpe = sharpe(sum, sumsq);
    out.bh_sharpe = sharpe(bh_sum, bh_sumsq);
    out.time_in_cash = cash_days / n;
    return out;
}

}  // namespace qgd
