#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "features.hpp"
#include "support/synthetic.hpp"

using namespace qgd;
using namespace qgd::test;

namespace {

PricePanel flat_panel(int n_days, double price = 100.0) {
    PricePanel p;
    p.calendar = weekday_calendar("2010-01-04", n_days);
    p.asset_names = {"AAA", "BBB"};
    p.adj_close = {std::vector<double>(n_days, price), std::vector<double>(n_days, price)};
    p.close = p.adj_close;
    return p;
}

}  // namespace

TEST_CASE("load_ohlcv builds the intersection calendar") {
    const std::string dir = temp_dir("load");
    const auto cal = weekday_calendar("2015-01-05", 310);
    std::vector<double> c0(310, 50.0), c1(309, 60.0);
    write_ohlcv_csv(dir + "/a.csv", cal, c0);

    // drop one mid-calendar date from the second asset
    auto cal_b = cal;
    cal_b.erase(cal_b.begin() + 100);
    write_ohlcv_csv(dir + "/b.csv", cal_b, c1);

    const PricePanel p = load_ohlcv({{"A", dir + "/a.csv"}, {"B", dir + "/b.csv"}});
    CHECK(p.size() == 309);
    for (int t = 1; t < p.size(); ++t) CHECK(p.calendar[t] > p.calendar[t - 1]);
    CHECK(p.calendar[100] == cal[101]);  // the dropped date is gone everywhere
}

TEST_CASE("load_ohlcv rejects short history") {
    const std::string dir = temp_dir("short");
    const auto cal = weekday_calendar("2015-01-05", 10);
    write_ohlcv_csv(dir + "/a.csv", cal, std::vector<double>(10, 1.0));
    write_ohlcv_csv(dir + "/b.csv", cal, std::vector<double>(10, 1.0));
    CHECK_THROWS_WITH_AS(load_ohlcv({{"A", dir + "/a.csv"}, {"B", dir + "/b.csv"}}),
                         doctest::Contains("insufficient"), Error);
}

TEST_CASE("load_ohlcv reports the file and line of a malformed cell") {
    const std::string dir = temp_dir("bad");
    const auto cal = weekday_calendar("2015-01-05", 5);
    write_ohlcv_csv(dir + "/a.csv", cal, std::vector<double>(5, 1.0));
    {
        std::ofstream out(dir + "/a.csv", std::ios::app);
        out << "2015-02-05,1,1,1,oops,1,10\n";
    }
    write_ohlcv_csv(dir + "/b.csv", cal, std::vector<double>(5, 1.0));
    try {
        load_ohlcv({{"A", dir + "/a.csv"}, {"B", dir + "/b.csv"}});
        FAIL("expected an error");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("a.csv") != std::string::npos);
        CHECK(msg.find(":7") != std::string::npos);
        CHECK(msg.find("oops") != std::string::npos);
    }
}

TEST_CASE("load_ohlcv rejects missing files") {
    CHECK_THROWS_AS(load_ohlcv({{"A", "does_not_exist.csv"}, {"B", "nope.csv"}}), Error);
}

TEST_CASE("raw features of a constant panel vanish") {
    const FeatureMatrix f = raw_features(flat_panel(60));
    CHECK(f.values.cols() == 13);
    CHECK(f.valid_from == 20);
    for (int t = f.valid_from; t < 60; ++t)
        for (int j = 0; j < 13; ++j) CHECK(f.values(t, j) == doctest::Approx(0.0));
}

TEST_CASE("a price doubling shows up as log return ln 2") {
    PricePanel p = flat_panel(40);
    for (int t = 25; t < 40; ++t) {
        p.adj_close[0][t] = 200.0;
        p.close[0][t] = 200.0;
    }
    const FeatureMatrix f = raw_features(p);
    CHECK(f.values(25, 0) == doctest::Approx(std::log(2.0)));
    CHECK(f.values(26, 0) == doctest::Approx(0.0));
}

TEST_CASE("raw features match an independent recomputation") {
    const PlantedPanel pp = make_planted_panel(120, 0, 0.01, 1.0, 5);
    const FeatureMatrix f = raw_features(pp.panel);
    const auto& p0 = pp.panel.adj_close[0];
    const auto& p1 = pp.panel.adj_close[1];

    for (int t = f.valid_from; t < 120; ++t) {
        // log returns
        const double r0 = std::log(p0[t] / p0[t - 1]);
        CHECK(std::abs(f.values(t, 0) - r0) < 1e-12);

        // 5-day volatility of asset 1
        std::vector<double> window;
        for (int i = t - 4; i <= t; ++i) window.push_back(std::log(p1[i] / p1[i - 1]));
        double mean = 0.0;
        for (double v : window) mean += v;
        mean /= 5.0;
        double ss = 0.0;
        for (double v : window) ss += (v - mean) * (v - mean);
        CHECK(std::abs(f.values(t, 3) - std::sqrt(ss / 4.0)) < 1e-12);

        // 20-day momentum of asset 0
        CHECK(std::abs(f.values(t, 8) - (p0[t] / p0[t - 20] - 1.0)) < 1e-12);

        // 5-day dispersion mean
        double disp = 0.0;
        for (int i = t - 4; i <= t; ++i)
            disp += std::abs(std::log(p0[i] / p0[i - 1]) - std::log(p1[i] / p1[i - 1]));
        CHECK(std::abs(f.values(t, 11) - disp / 5.0) < 1e-12);

        // 20-day correlation stays in [-1, 1]
        CHECK(f.values(t, 10) <= 1.0 + 1e-12);
        CHECK(f.values(t, 10) >= -1.0 - 1e-12);
    }
}

TEST_CASE("enrich expands each column into rolling mean/std/min/max") {
    const PlantedPanel pp = make_planted_panel(150, 0, 0.01, 1.0, 6);
    const FeatureMatrix raw = raw_features(pp.panel);
    const FeatureMatrix enr = enrich(raw, 20);
    CHECK(enr.values.cols() == 52);
    CHECK(enr.valid_from == raw.valid_from + 19);

    for (int t = enr.valid_from; t < 150; t += 13) {
        for (int c = 0; c < 13; c += 5) {
            std::vector<double> w;
            for (int i = t - 19; i <= t; ++i) w.push_back(raw.values(i, c));
            double mean = 0.0, mn = w[0], mx = w[0];
            for (double v : w) {
                mean += v;
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
            mean /= 20.0;
            double ss = 0.0;
            for (double v : w) ss += (v - mean) * (v - mean);
            CHECK(std::abs(enr.values(t, 4 * c + 0) - mean) < 1e-12);
            CHECK(std::abs(enr.values(t, 4 * c + 1) - std::sqrt(ss / 19.0)) < 1e-12);
            CHECK(enr.values(t, 4 * c + 2) == mn);
            CHECK(enr.values(t, 4 * c + 3) == mx);
        }
    }
}

TEST_CASE("enrich of a constant column gives mean = min = max, std 0") {
    const FeatureMatrix raw = raw_features(flat_panel(80));
    const FeatureMatrix enr = enrich(raw, 20);
    const int t = enr.valid_from + 5;
    CHECK(enr.values(t, 0) == doctest::Approx(0.0));  // mean of zero returns
    CHECK(enr.values(t, 1) == doctest::Approx(0.0));  // std
    CHECK(enr.values(t, 2) == enr.values(t, 3));      // min == max
}

TEST_CASE("rolling max of a ramp is the current value") {
    FeatureMatrix raw;
    raw.valid_from = 0;
    raw.names = {"ramp"};
    raw.values = RMatrix(60, 1);
    for (int t = 0; t < 60; ++t) raw.values(t, 0) = t + 1.0;
    const FeatureMatrix enr = enrich(raw, 20);
    for (int t = enr.valid_from; t < 60; ++t) CHECK(enr.values(t, 3) == raw.values(t, 0));
}

TEST_CASE("preprocessor standardizes its training window") {
    const PlantedPanel pp = make_planted_panel(400, 0, 0.01, 1.0, 7);
    const FeatureMatrix enr = enrich(raw_features(pp.panel), 20);
    const int cutoff = 350;
    const Preprocessor prep = fit_preprocessor(enr, cutoff, 5);

    for (int j = 0; j < enr.values.cols(); ++j) {
        double s = 0.0, ss = 0.0;
        const int count = cutoff - enr.valid_from + 1;
        for (int t = enr.valid_from; t <= cutoff; ++t) {
            const double z = (enr.values(t, j) - prep.mean[j]) / std::max(prep.stdev[j], 1e-12);
            s += z;
            ss += z * z;
        }
        CHECK(std::abs(s / count) < 1e-10);
        CHECK(std::abs(ss / (count - 1) - 1.0) < 1e-8);
    }

    // orthonormal loadings with a positive largest entry
    for (int a = 0; a < 5; ++a) {
        for (int b = 0; b < 5; ++b) {
            double dot = 0.0;
            for (int j = 0; j < enr.values.cols(); ++j) dot += prep.loadings(j, a) * prep.loadings(j, b);
            CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-10);
        }
        double best = 0.0;
        for (int j = 0; j < enr.values.cols(); ++j)
            if (std::abs(prep.loadings(j, a)) > std::abs(best)) best = prep.loadings(j, a);
        CHECK(best > 0.0);
    }
    for (size_t k = 1; k < prep.eigenvalues.size(); ++k)
        CHECK(prep.eigenvalues[k - 1] >= prep.eigenvalues[k]);
}

TEST_CASE("planted two-factor structure dominates the spectrum") {
    // two independent factors drive all columns; noise is tiny
    SplitMix64 rng(8);
    const int t_len = 300, cols = 10;
    FeatureMatrix f;
    f.valid_from = 0;
    f.values = RMatrix(t_len, cols);
    std::vector<double> w1(cols), w2(cols);
    for (int j = 0; j < cols; ++j) {
        w1[j] = rng.gaussian();
        w2[j] = rng.gaussian();
        f.names.push_back("col" + std::to_string(j));
    }
    for (int t = 0; t < t_len; ++t) {
        const double f1 = rng.gaussian(), f2 = rng.gaussian();
        for (int j = 0; j < cols; ++j)
            f.values(t, j) = w1[j] * f1 + w2[j] * f2 + 0.01 * rng.gaussian();
    }
    const Preprocessor prep = fit_preprocessor(f, t_len - 1, 5);
    CHECK(prep.eigenvalues[1] / prep.eigenvalues[2] > 10.0);
}

TEST_CASE("preprocessor fit is deterministic and causal") {
    const PlantedPanel pp = make_planted_panel(400, 0, 0.01, 1.0, 9);
    FeatureMatrix enr = enrich(raw_features(pp.panel), 20);
    const int cutoff = 300;
    const Preprocessor a = fit_preprocessor(enr, cutoff, 6);
    const Preprocessor b = fit_preprocessor(enr, cutoff, 6);
    CHECK(a.mean == b.mean);
    CHECK(a.stdev == b.stdev);
    CHECK(a.loadings.data() == b.loadings.data());
    CHECK(a.eigenvalues == b.eigenvalues);

    // mutating rows after the cutoff must not move a single bit
    for (int t = cutoff + 1; t < 400; ++t)
        for (int j = 0; j < enr.values.cols(); ++j) enr.values(t, j) *= -3.7;
    const Preprocessor c = fit_preprocessor(enr, cutoff, 6);
    CHECK(a.mean == c.mean);
    CHECK(a.stdev == c.stdev);
    CHECK(a.loadings.data() == c.loadings.data());
    CHECK(a.eigenvalues == c.eigenvalues);
}

TEST_CASE("fit_preprocessor rejects infeasible requests") {
    const PlantedPanel pp = make_planted_panel(200, 0, 0.01, 1.0, 10);
    const FeatureMatrix enr = enrich(raw_features(pp.panel), 20);
    CHECK_THROWS_AS(fit_preprocessor(enr, enr.valid_from + 10, 5), Error);

    // rank-deficient: constant features admit no positive-variance directions
    const FeatureMatrix flat = enrich(raw_features(flat_panel(300)), 20);
    CHECK_THROWS_WITH_AS(fit_preprocessor(flat, 250, 5), doctest::Contains("rank"), Error);
}

TEST_CASE("transform unit-normalizes rows and flags degenerate ones") {
    const PlantedPanel pp = make_planted_panel(400, 0, 0.01, 1.0, 11);
    const FeatureMatrix enr = enrich(raw_features(pp.panel), 20);
    const Preprocessor prep = fit_preprocessor(enr, 350, 6);
    const EmbeddedSeries e = transform(prep, enr);

    CHECK(e.size() == 400);
    for (int t = 0; t < enr.valid_from; ++t) CHECK_FALSE(e.defined[t]);
    int defined = 0;
    for (int t = enr.valid_from; t < 400; ++t) {
        if (!e.defined[t]) continue;
        ++defined;
        double n2 = 0.0;
        for (int j = 0; j < 6; ++j) n2 += e.x(t, j) * e.x(t, j);
        CHECK(std::abs(std::sqrt(n2) - 1.0) < 1e-12);
    }
    CHECK(defined > 300);

    // a row equal to the training mean standardizes to zero and is flagged
    FeatureMatrix probe = enr;
    for (int j = 0; j < enr.values.cols(); ++j) probe.values(enr.valid_from, j) = prep.mean[j];
    const EmbeddedSeries e2 = transform(prep, probe);
    CHECK_FALSE(e2.defined[enr.valid_from]);
    for (int j = 0; j < 6; ++j) CHECK(e2.x(enr.valid_from, j) == 0.0);
}

TEST_CASE("transform matches the project-then-normalize oracle") {
    const PlantedPanel pp = make_planted_panel(350, 0, 0.01, 1.0, 12);
    const FeatureMatrix enr = enrich(raw_features(pp.panel), 20);
    const Preprocessor prep = fit_preprocessor(enr, 300, 4);
    const EmbeddedSeries e = transform(prep, enr);

    const int t = 320;
    std::vector<double> y(4, 0.0);
    for (int j = 0; j < enr.values.cols(); ++j) {
        const double z = (enr.values(t, j) - prep.mean[j]) / std::max(prep.stdev[j], 1e-12);
        for (int a = 0; a < 4; ++a) y[a] += z * prep.loadings(j, a);
    }
    double n2 = 0.0;
    for (double v : y) n2 += v * v;
    for (int a = 0; a < 4; ++a) CHECK(e.x(t, a) == doctest::Approx(y[a] / std::sqrt(n2)));
}
