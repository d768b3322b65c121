#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "csv.hpp"
#include "json.hpp"
#include "rng.hpp"

namespace qgd {

namespace {

using nlohmann::json;

ChannelConfig channel_from_json(const json& j) {
    ChannelConfig cfg = default_channel_config(channel_from_string(j.at("id").get<std::string>()));
    if (j.contains("n")) cfg.n = j["n"].get<int>();
    if (j.contains("p")) cfg.p = j["p"].get<int>();
    if (j.contains("w")) cfg.w = j["w"].get<int>();
    if (j.contains("m")) cfg.m = j["m"].get<int>();
    if (j.contains("method")) cfg.method = operator_method_from_string(j["method"].get<std::string>());
    if (j.contains("eps")) cfg.eps = j["eps"].get<double>();
    if (j.contains("lags")) cfg.lags = j["lags"].get<int>();
    if (j.contains("bipartition_a")) cfg.bipartition_a = j["bipartition_a"].get<int>();
    if (j.contains("curv_a")) cfg.curv_a = j["curv_a"].get<int>();
    if (j.contains("curv_b")) cfg.curv_b = j["curv_b"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("seed_offset")) cfg.seed_offset = j["seed_offset"].get<int>();
    if (j.contains("sign")) cfg.sign = j["sign"].get<int>();
    cfg.validate();
    return cfg;
}

BaselineConfig baseline_from_json(const json& j) {
    BaselineConfig cfg;
    cfg.method = j.at("method").get<std::string>();
    if (j.contains("vol_window")) cfg.vol_window = j["vol_window"].get<int>();
    if (j.contains("k")) cfg.cusum_k = j["k"].get<double>();
    if (j.contains("burn_in")) cfg.burn_in = j["burn_in"].get<int>();
    if (j.contains("corr_window")) cfg.corr_window = j["corr_window"].get<int>();
    if (j.contains("min_history")) cfg.min_history = j["min_history"].get<int>();
    if (j.contains("m")) cfg.m = j["m"].get<int>();
    return cfg;
}

}  // namespace

RunConfig default_run_config() {
    RunConfig cfg;
    cfg.channels = {default_channel_config(Channel::berry_rate),
                    default_channel_config(Channel::spectral_entropy),
                    default_channel_config(Channel::ham_sensitivity),
                    default_channel_config(Channel::reduced_purity),
                    default_channel_config(Channel::qfi_logdet),
                    default_channel_config(Channel::multilag_fidelity),
                    default_channel_config(Channel::ground_energy)};
    cfg.baselines = {BaselineConfig{.method = "rolling_vol_z"}, BaselineConfig{.method = "cusum"},
                     BaselineConfig{.method = "absorption_ratio"},
                     BaselineConfig{.method = "turbulence"}};
    return cfg;
}

RunConfig parse_run_config(const std::string& json_text, const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw Error(Errc::invalid_argument, origin + ": " + e.what());
    }

    RunConfig cfg;
    cfg.seed = j.value("seed", std::uint64_t{42});
    cfg.output_dir = j.value("output_dir", std::string("out"));
    if (j.contains("data") && j["data"].contains("assets"))
        for (const auto& a : j["data"]["assets"])
            cfg.assets.push_back({a.at("name").get<std::string>(), a.at("path").get<std::string>()});
    cfg.crisis_file = j.value("crisis_file", std::string());
    if (j.contains("features"))
        cfg.enrich_lookback = j["features"].value("enrich_lookback", 20);

    if (j.contains("channels"))
        for (const auto& c : j["channels"]) cfg.channels.push_back(channel_from_json(c));
    else
        cfg.channels = default_run_config().channels;
    if (j.contains("baselines"))
        for (const auto& b : j["baselines"]) cfg.baselines.push_back(baseline_from_json(b));
    else
        cfg.baselines = default_run_config().baselines;
    if (j.contains("imported_scores"))
        for (const auto& s : j["imported_scores"])
            cfg.imported_scores.push_back(
                {s.at("name").get<std::string>(), s.at("path").get<std::string>()});

    if (j.contains("evaluation")) {
        const auto& e = j["evaluation"];
        cfg.eval.extension_days = e.value("extension_days", 10);
        cfg.eval.cutoff_calendar_days = e.value("cutoff_calendar_days", 10);
        cfg.eval.bootstrap_resamples = e.value("bootstrap_resamples", 10000);
        cfg.eval.n_permutations = e.value("n_permutations", 5000);
        cfg.null_draws = e.value("null_draws", 1000);
        cfg.null_channel = e.value("null_channel", std::string("berry_rate"));
    }
    cfg.eval.seed = cfg.seed;

    if (j.contains("walkforward")) {
        const auto& w = j["walkforward"];
        if (w.contains("train_start")) cfg.wf.train_start = parse_date(w["train_start"].get<std::string>());
        cfg.wf.first_eval_year = w.value("first_eval_year", 0);
        cfg.wf.last_eval_year = w.value("last_eval_year", 0);
        cfg.wf.strategy = w.value("strategy", std::string("far"));
        cfg.wf.fixed_tau = w.value("fixed_tau", 2.0);
        cfg.wf.far_alpha = w.value("far_alpha", 1.0);
        cfg.wf.min_train_days = w.value("min_train_days", 756);
        cfg.wf.hpo = w.value("hpo", false);
    }
    cfg.wf.extension_days = cfg.eval.extension_days;
    cfg.wf.cutoff_calendar_days = cfg.eval.cutoff_calendar_days;

    if (j.contains("overlay")) {
        const auto& o = j["overlay"];
        cfg.overlay_channel = o.value("channel", std::string("berry_rate"));
        cfg.overlay_tau = o.value("tau", 2.0);
        cfg.overlay_cooldown = o.value("cooldown", 60);
    }
    if (j.contains("validate")) {
        const auto& v = j["validate"];
        cfg.validate_qfi_points = v.value("qfi_points", 500);
        cfg.validate_bound_points = v.value("bound_points", 1500);
        cfg.validate_sphere_grid = v.value("sphere_grid", 40);
        cfg.validate_gap_steps = v.value("gap_steps", 5000);
        cfg.validate_eps = v.value("eps", 1e-5);
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_run_config(text, path);
}

void apply_override(RunConfig& cfg, const std::string& dotted_key, const std::string& json_value) {
    json v;
    try {
        v = json::parse(json_value);
    } catch (const std::exception& e) {
        throw Error(Errc::invalid_argument, "override value for '" + dotted_key + "': " + e.what());
    }
    if (dotted_key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
        cfg.eval.seed = cfg.seed;
    } else if (dotted_key == "output_dir") {
        cfg.output_dir = v.get<std::string>();
    } else if (dotted_key == "crisis_file") {
        cfg.crisis_file = v.get<std::string>();
    } else if (dotted_key == "walkforward.strategy") {
        cfg.wf.strategy = v.get<std::string>();
    } else if (dotted_key == "walkforward.hpo") {
        cfg.wf.hpo = v.get<bool>();
    } else if (dotted_key == "overlay.tau") {
        cfg.overlay_tau = v.get<double>();
    } else if (dotted_key == "overlay.cooldown") {
        cfg.overlay_cooldown = v.get<int>();
    } else if (dotted_key == "overlay.channel") {
        cfg.overlay_channel = v.get<std::string>();
    } else {
        throw Error(Errc::invalid_argument, "unknown override key: " + dotted_key);
    }
}

namespace {

struct LoadedData {
    PricePanel panel;
    FeatureMatrix raw;
    FeatureMatrix enriched;
};

LoadedData load_data(const RunConfig& cfg) {
    if (cfg.assets.empty())
        throw Error(Errc::invalid_argument, "config provides no data.assets entries");
    LoadedData d;
    d.panel = load_ohlcv(cfg.assets);
    d.raw = raw_features(d.panel);
    d.enriched = enrich(d.raw, cfg.enrich_lookback);
    return d;
}

std::vector<CrisisWindow> crises_for(const RunConfig& cfg) {
    if (cfg.crisis_file.empty()) return builtin_crises();
    return load_crises(cfg.crisis_file);
}

std::vector<MethodSpec> methods_for(const RunConfig& cfg, const PricePanel& panel) {
    std::vector<MethodSpec> methods;
    for (const auto& ch : cfg.channels) {
        MethodSpec s;
        s.kind = MethodSpec::Kind::channel;
        s.name = to_string(ch.id);
        s.channel = ch;
        methods.push_back(std::move(s));
    }
    for (const auto& b : cfg.baselines) {
        MethodSpec s;
        s.kind = MethodSpec::Kind::baseline;
        s.name = b.method;
        s.baseline = b;
        methods.push_back(std::move(s));
    }
    for (const auto& [name, path] : cfg.imported_scores) {
        MethodSpec s;
        s.kind = MethodSpec::Kind::imported;
        s.name = name;
        s.imported_z = read_imported_scores(path, panel.calendar);
        methods.push_back(std::move(s));
    }
    return methods;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(Errc::io, "cannot create output directory: " + dir);
}

void write_feature_csv(const std::string& path, const std::vector<Date>& calendar,
                       const FeatureMatrix& f) {
    std::vector<std::string> header = {"date"};
    for (const auto& n : f.names) header.push_back(n);
    std::vector<std::vector<std::string>> rows;
    for (int t = 0; t < f.values.rows(); ++t) {
        std::vector<std::string> row = {format_date(calendar[t])};
        for (int j = 0; j < f.values.cols(); ++j) row.push_back(format_double(f.values(t, j)));
        rows.push_back(std::move(row));
    }
    write_csv(path, header, rows);
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::io, "cannot write file: " + path);
    out << j.dump(2) << "\n";
}

json effect_cell_json(const EffectSizeResult& c) {
    json j;
    j["method"] = c.method;
    j["crisis"] = c.crisis;
    j["defined"] = c.defined;
    j["skipped"] = c.skipped;
    if (!c.note.empty()) j["note"] = c.note;
    if (c.defined) {
        j["cohens_d"] = c.d;
        j["cliffs_delta"] = c.delta;
        j["ci_lo"] = c.ci_lo;
        j["ci_hi"] = c.ci_hi;
        j["n_crisis"] = c.n_crisis;
        j["n_normal"] = c.n_normal;
        j["p_welch"] = c.p_welch;
        j["p_welch_holm"] = c.p_welch_holm;
        j["p_permutation"] = c.p_permutation;
    }
    return j;
}

}  // namespace

void write_score_csv(const std::string& path, const std::vector<Date>& calendar,
                     const ScoreSeries& s) {
    std::vector<std::vector<std::string>> rows;
    for (size_t t = 0; t < s.z.size(); ++t) {
        rows.push_back({format_date(calendar[t]), format_double(s.raw[t]),
                        format_double(s.smoothed[t]), format_double(s.z[t]),
                        is_defined(s.z[t]) ? "0" : "1"});
    }
    write_csv(path, {"date", "raw", "smoothed", "z", "flag"}, rows);
}

std::vector<double> read_imported_scores(const std::string& path, const std::vector<Date>& calendar) {
    const CsvTable t = read_csv(path);
    const int c_date = t.column("date");
    const int c_z = t.column("z");
    if (c_date < 0 || c_z < 0)
        throw Error(Errc::invalid_argument, path + ": imported scores need 'date' and 'z' columns");
    std::map<Date, double> by_date;
    for (size_t i = 0; i < t.rows.size(); ++i) {
        const Date d = parse_date(t.rows[i][c_date]);
        const std::string& cell = t.rows[i][c_z];
        by_date[d] = (cell == "nan" || cell.empty()) ? nan_value()
                                                     : parse_number(cell, path, i + 2);
    }
    std::vector<double> out(calendar.size(), nan_value());
    for (size_t i = 0; i < calendar.size(); ++i) {
        auto it = by_date.find(calendar[i]);
        if (it != by_date.end()) out[i] = it->second;
    }
    return out;
}

void write_score_svg(const std::string& path, const std::vector<Date>& calendar,
                     const std::vector<double>& z, const std::vector<CrisisSpan>& spans,
                     const std::string& title) {
    const int width = 900, height = 260, pad = 30;
    const int t_len = static_cast<int>(z.size());
    double lo = 0.0, hi = 1.0;
    bool any = false;
    for (double v : z)
        if (is_defined(v)) {
            if (!any) {
                lo = hi = v;
                any = true;
            }
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!any || hi - lo < 1e-12) hi = lo + 1.0;

    auto sx = [&](int t) { return pad + (width - 2.0 * pad) * t / std::max(1, t_len - 1); };
    auto sy = [&](double v) { return height - pad - (height - 2.0 * pad) * (v - lo) / (hi - lo); };

    std::ofstream out(path);
    if (!out) throw Error(Errc::io, "cannot write file: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& s : spans) {
        if (s.last < s.first || s.first >= t_len) continue;
        const double x0 = sx(std::max(0, s.first));
        const double x1 = sx(std::min(t_len - 1, s.last));
        out << "<rect x=\"" << x0 << "\" y=\"" << pad << "\" width=\"" << (x1 - x0)
            << "\" height=\"" << (height - 2 * pad) << "\" fill=\"#fbb\" opacity=\"0.5\"/>\n";
    }
    out << "<polyline fill=\"none\" stroke=\"#136\" stroke-width=\"1\" points=\"";
    bool open = false;
    for (int t = 0; t < t_len; ++t) {
        if (!is_defined(z[t])) {
            open = false;
            continue;
        }
        out << (open ? " " : "") << sx(t) << "," << sy(z[t]);
        open = true;
    }
    out << "\"/>\n";
    out << "<text x=\"" << pad << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">" << title
        << "</text>\n";
    if (!calendar.empty()) {
        out << "<text x=\"" << pad << "\" y=\"" << height - 8
            << "\" font-family=\"sans-serif\" font-size=\"10\">" << format_date(calendar.front())
            << "</text>\n";
        out << "<text x=\"" << width - pad - 70 << "\" y=\"" << height - 8
            << "\" font-family=\"sans-serif\" font-size=\"10\">" << format_date(calendar.back())
            << "</text>\n";
    }
    out << "</svg>\n";
}

void run_features(const RunConfig& cfg) {
    const LoadedData d = load_data(cfg);
    ensure_dir(cfg.output_dir);
    write_feature_csv(cfg.output_dir + "/features_raw.csv", d.panel.calendar, d.raw);
    write_feature_csv(cfg.output_dir + "/features_enriched.csv", d.panel.calendar, d.enriched);
}

void run_score(const RunConfig& cfg) {
    const LoadedData d = load_data(cfg);
    ensure_dir(cfg.output_dir + "/scores");
    ensure_dir(cfg.output_dir + "/plots");
    std::vector<CrisisSpan> spans;
    for (const auto& c : crises_for(cfg)) spans.push_back(crisis_span(d.panel, c, cfg.eval.extension_days));

    const int full_fit = d.panel.size() - 1;
    for (const auto& ch : cfg.channels) {
        const ScoreSeries s = channel_score(d.enriched, ch, full_fit);
        write_score_csv(cfg.output_dir + "/scores/" + to_string(ch.id) + ".csv", d.panel.calendar, s);
        write_score_svg(cfg.output_dir + "/plots/" + to_string(ch.id) + ".svg", d.panel.calendar, s.z,
                        spans, to_string(ch.id));
    }
    for (const auto& b : cfg.baselines) {
        const ScoreSeries s = run_baseline(b, d.panel, d.enriched);
        write_score_csv(cfg.output_dir + "/scores/" + b.method + ".csv", d.panel.calendar, s);
        write_score_svg(cfg.output_dir + "/plots/" + b.method + ".svg", d.panel.calendar, s.z, spans,
                        b.method);
    }
}

void run_evaluate(const RunConfig& cfg) {
    const LoadedData d = load_data(cfg);
    const std::vector<CrisisWindow> crises = crises_for(cfg);
    const std::vector<MethodSpec> methods = methods_for(cfg, d.panel);
    const EvalReport report = crisis_separability(d.panel, d.enriched, methods, crises, cfg.eval);

    ensure_dir(cfg.output_dir);
    json j;
    j["methods"] = report.methods;
    j["crises"] = report.crises;
    j["median_d"] = report.median_d;
    j["mean_ranks"] = report.mean_ranks;
    j["n_rank_crises"] = report.n_rank_crises;
    j["friedman"] = {{"chi2", report.friedman.chi2},
                     {"p", report.friedman.p},
                     {"nemenyi_cd", report.friedman.cd}};
    j["cells"] = json::array();
    for (const auto& c : report.cells) j["cells"].push_back(effect_cell_json(c));

    // null models on the configured channel with a single global fit
    for (const auto& ch : cfg.channels) {
        if (to_string(ch.id) != cfg.null_channel) continue;
        std::vector<CrisisSpan> spans;
        for (const auto& c : crises) spans.push_back(crisis_span(d.panel, c, cfg.eval.extension_days));
        const ScoreSeries s = channel_score(d.enriched, ch, d.panel.size() - 1);
        try {
            const NullModelResult nm = null_models(s.z, spans, cfg.null_draws, cfg.seed);
            j["null_models"] = {{"channel", cfg.null_channel},
                                {"real_median_d", nm.real_median_d},
                                {"percentile_shift", nm.percentile_shift},
                                {"percentile_windows", nm.percentile_windows},
                                {"p_shift", nm.p_shift},
                                {"p_windows", nm.p_windows}};
        } catch (const Error& e) {
            j["null_models"] = {{"channel", cfg.null_channel}, {"error", e.what()}};
        }
        break;
    }
    write_json_file(cfg.output_dir + "/evaluation.json", j);

    std::vector<std::vector<std::string>> rows;
    for (size_t mi = 0; mi < report.methods.size(); ++mi)
        rows.push_back({report.methods[mi], format_double(report.median_d[mi]),
                        format_double(report.mean_ranks[mi])});
    write_csv(cfg.output_dir + "/evaluation_summary.csv", {"method", "median_d", "mean_rank"}, rows);

    std::vector<std::vector<std::string>> cell_rows;
    for (const auto& c : report.cells)
        cell_rows.push_back({c.method, c.crisis, c.defined ? format_double(c.d) : "nan",
                             c.defined ? format_double(c.delta) : "nan",
                             c.defined ? format_double(c.ci_lo) : "nan",
                             c.defined ? format_double(c.ci_hi) : "nan",
                             std::to_string(c.n_crisis), std::to_string(c.n_normal),
                             c.defined ? format_double(c.p_welch_holm) : "nan",
                             c.defined ? format_double(c.p_permutation) : "nan",
                             c.skipped ? "skipped" : (c.defined ? "ok" : "undefined")});
    write_csv(cfg.output_dir + "/evaluation_cells.csv",
              {"method", "crisis", "cohens_d", "cliffs_delta", "ci_lo", "ci_hi", "n_crisis",
               "n_normal", "p_welch_holm", "p_permutation", "status"},
              cell_rows);
}

void run_walkforward(const RunConfig& cfg) {
    const LoadedData d = load_data(cfg);
    const std::vector<CrisisWindow> crises = crises_for(cfg);
    const std::vector<MethodSpec> methods = methods_for(cfg, d.panel);
    const WalkForwardReport report = walk_forward(d.panel, d.enriched, methods, crises, cfg.wf);

    ensure_dir(cfg.output_dir);
    json j;
    j["strategy"] = cfg.wf.strategy;
    j["hpo"] = cfg.wf.hpo;
    j["crisis_results"] = json::array();
    for (const auto& r : report.crisis_results) {
        json c = {{"method", r.method}, {"crisis", r.crisis},   {"year", r.year},
                  {"detected", r.detected}, {"strategy", r.strategy}};
        if (r.detected) c["delay"] = r.delay;
        if (r.oos_d_defined) c["oos_d"] = r.oos_d;
        j["crisis_results"].push_back(c);
    }
    j["year_results"] = json::array();
    for (const auto& y : report.year_results) {
        json c = {{"method", y.method},
                  {"year", y.year},
                  {"n_false_alarms", y.n_false_alarms},
                  {"far_events", y.far_events}};
        if (is_defined(y.exceedance_rate)) c["exceedance_rate"] = y.exceedance_rate;
        if (is_defined(y.threshold)) c["threshold"] = y.threshold;
        if (!y.hpo_config.empty()) c["hpo_config"] = y.hpo_config;
        if (y.hpo_fallback) c["hpo_fallback"] = true;
        if (!y.note.empty()) c["note"] = y.note;
        j["year_results"].push_back(c);
    }
    write_json_file(cfg.output_dir + "/walkforward.json", j);

    std::vector<std::vector<std::string>> rows;
    for (const auto& r : report.crisis_results)
        rows.push_back({r.method, r.crisis, std::to_string(r.year), r.detected ? "1" : "0",
                        r.detected ? std::to_string(r.delay) : "",
                        r.oos_d_defined ? format_double(r.oos_d) : "nan"});
    write_csv(cfg.output_dir + "/walkforward_crises.csv",
              {"method", "crisis", "year", "detected", "delay", "oos_d"}, rows);
}

CVector bloch_ground_state(double theta, double phi) {
    CMatrix h(2);
    const double sx = std::sin(theta) * std::cos(phi);
    const double sy = std::sin(theta) * std::sin(phi);
    const double sz = std::cos(theta);
    h(0, 0) = -sz;
    h(1, 1) = sz;
    h(0, 1) = cx(-sx, sy);
    h(1, 0) = cx(-sx, -sy);
    const EigenSystem es = eigh(h);
    CVector psi(2);
    psi[0] = es.vectors(0, 0);
    psi[1] = es.vectors(1, 0);
    return psi;
}

ValidationReport validate_formal_checks(int qfi_points, int bound_points, int sphere_grid, int gap_steps,
                                   double eps, std::uint64_t seed) {
    ValidationReport rep;
    const OperatorSet ops = make_random_operators(8, 8, seed);

    auto random_unit_point = [](SplitMix64& rng, int p) {
        std::vector<double> x(p);
        double n2 = 0.0;
        for (auto& v : x) {
            v = rng.gaussian();
            n2 += v * v;
        }
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& v : x) v *= inv;
        return x;
    };

    // QFI-metric identity: finite differences vs perturbation theory
    {
        SplitMix64 rng(SplitMix64::substream(seed, 101));
        double sum_xy = 0.0, sum_x = 0.0, sum_y = 0.0, sum_x2 = 0.0, sum_y2 = 0.0, sum_sq = 0.0;
        long count = 0;
        for (int i = 0; i < qfi_points; ++i) {
            const std::vector<double> x = random_unit_point(rng, ops.p);
            const MetricTensor fd = metric_fd(ops, x, eps);
            const MetricTensor pt = metric_pt(ops, x);
            for (int a = 0; a < ops.p; ++a)
                for (int b = 0; b < ops.p; ++b) {
                    const double u = fd.g(a, b), v = pt.g(a, b);
                    sum_xy += u * v;
                    sum_x += u;
                    sum_y += v;
                    sum_x2 += u * u;
                    sum_y2 += v * v;
                    sum_sq += (u - v) * (u - v);
                    ++count;
                }
        }
        const double n = static_cast<double>(count);
        const double cov = sum_xy / n - (sum_x / n) * (sum_y / n);
        const double vx = sum_x2 / n - (sum_x / n) * (sum_x / n);
        const double vy = sum_y2 / n - (sum_y / n) * (sum_y / n);
        rep.qfi_pearson_r = cov / std::sqrt(vx * vy);
        rep.qfi_rmse = std::sqrt(sum_sq / n);
        rep.qfi_pass = rep.qfi_pearson_r >= 0.999999 && rep.qfi_rmse <= 1e-9;
    }

    // curvature-gap bound
    {
        SplitMix64 rng(SplitMix64::substream(seed, 102));
        int satisfied = 0;
        double max_ratio = 0.0;
        for (int i = 0; i < bound_points; ++i) {
            const std::vector<double> x = random_unit_point(rng, ops.p);
            const BoundCheck bc = curvature_gap_bound_check(ops, x, eps, 0, 1);
            if (bc.satisfied) ++satisfied;
            if (bc.rhs > 0.0) max_ratio = std::max(max_ratio, bc.lhs / bc.rhs);
        }
        rep.bound_fraction_satisfied = static_cast<double>(satisfied) / bound_points;
        rep.bound_max_ratio = max_ratio;
        rep.bound_pass = satisfied == bound_points;
    }

    // Chern quantization on the two-level monopole oracle
    {
        rep.chern_value = chern_sphere(bloch_ground_state, sphere_grid, sphere_grid);
        rep.chern_reversed = chern_sphere(bloch_ground_state, sphere_grid, sphere_grid, true);
        rep.chern_pass = std::abs(rep.chern_value - (-1.0)) <= 0.01 &&
                         rep.chern_reversed == -rep.chern_value;
    }

    // smoothness precondition: gap positivity along a synthetic stream
    {
        SplitMix64 rng(SplitMix64::substream(seed, 103));
        std::vector<double> x = random_unit_point(rng, ops.p);
        rep.min_gap = 1e300;
        rep.degenerate_steps = 0;
        for (int t = 0; t < gap_steps; ++t) {
            const GroundStateRecord rec = ground_state(ops, x);
            rep.min_gap = std::min(rep.min_gap, rec.gap);
            if (rec.degenerate) ++rep.degenerate_steps;
            double n2 = 0.0;
            for (auto& v : x) {
                v += 0.05 * rng.gaussian();
                n2 += v * v;
            }
            const double inv = 1.0 / std::sqrt(n2);
            for (auto& v : x) v *= inv;
        }
        rep.gap_pass = rep.min_gap > 1e-6 && rep.degenerate_steps == 0;
    }

    rep.all_pass = rep.qfi_pass && rep.bound_pass && rep.chern_pass && rep.gap_pass;
    return rep;
}

bool run_validate(const RunConfig& cfg) {
    const ValidationReport rep =
        validate_formal_checks(cfg.validate_qfi_points, cfg.validate_bound_points,
                          cfg.validate_sphere_grid, cfg.validate_gap_steps, cfg.validate_eps,
                          cfg.seed);
    ensure_dir(cfg.output_dir);
    json j;
    j["qfi_identity"] = {{"pearson_r", rep.qfi_pearson_r},
                         {"rmse", rep.qfi_rmse},
                         {"pass", rep.qfi_pass}};
    j["curvature_gap_bound"] = {{"fraction_satisfied", rep.bound_fraction_satisfied},
                                {"max_lhs_rhs_ratio", rep.bound_max_ratio},
                                {"pass", rep.bound_pass}};
    j["chern_quantization"] = {{"value", rep.chern_value},
                               {"reversed", rep.chern_reversed},
                               {"pass", rep.chern_pass}};
    j["gap_positivity"] = {{"min_gap", rep.min_gap},
                           {"degenerate_steps", rep.degenerate_steps},
                           {"pass", rep.gap_pass}};
    j["all_pass"] = rep.all_pass;
    write_json_file(cfg.output_dir + "/validation.json", j);
    return rep.all_pass;
}

void run_overlay(const RunConfig& cfg) {
    const LoadedData d = load_data(cfg);
    ScoreSeries score;
    bool found = false;
    for (const auto& ch : cfg.channels) {
        if (to_string(ch.id) != cfg.overlay_channel) continue;
        score = channel_score(d.enriched, ch, d.panel.size() - 1);
        found = true;
        break;
    }
    if (!found) {
        for (const auto& b : cfg.baselines) {
            if (b.method != cfg.overlay_channel) continue;
            score = run_baseline(b, d.panel, d.enriched);
            found = true;
            break;
        }
    }
    if (!found)
        throw Error(Errc::invalid_argument, "overlay channel not configured: " + cfg.overlay_channel);

    const OverlayResult r =
        overlay_backtest(d.panel.adj_close[0], score.z, cfg.overlay_tau, cfg.overlay_cooldown);
    ensure_dir(cfg.output_dir);
    json j;
    j["channel"] = cfg.overlay_channel;
    j["tau"] = cfg.overlay_tau;
    j["cooldown"] = cfg.overlay_cooldown;
    j["overlay"] = {{"total_return", r.total_return},
                    {"annualized_sharpe", r.annualized_sharpe},
                    {"max_drawdown", r.max_drawdown},
                    {"time_in_cash", r.time_in_cash},
                    {"n_exits", r.n_exits}};
    j["buy_and_hold"] = {{"total_return", r.bh_total_return},
                         {"annualized_sharpe", r.bh_sharpe},
                         {"max_drawdown", r.bh_max_drawdown}};
    write_json_file(cfg.output_dir + "/overlay.json", j);
}

}  // namespace qgd
