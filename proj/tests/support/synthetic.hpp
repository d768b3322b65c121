#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "evaluation.hpp"
#include "rng.hpp"

namespace qgd::test {

// weekday calendar starting at an anchor date
inline std::vector<Date> weekday_calendar(const std::string& start_iso, int n_days) {
    std::vector<Date> out;
    Date d = parse_date(start_iso);
    while (static_cast<int>(out.size()) < n_days) {
        const int dow = ((d % 7) + 7) % 7;  // 1970-01-01 was a Thursday: dow 0 == Thursday
        const bool weekend = dow == 2 || dow == 3;  // Saturday, Sunday
        if (!weekend) out.push_back(d);
        ++d;
    }
    return out;
}

struct PlantedPanel {
    PricePanel panel;
    std::vector<CrisisWindow> crises;
    std::vector<int> window_starts;  // trading-day indices
    int window_len = 40;
};

// Two correlated assets with i.i.d. Gaussian log returns; inside each
// planted window the return scale is multiplied by `crisis_mult`.
inline PlantedPanel make_planted_panel(int n_days, int n_windows, double calm_sigma,
                                       double crisis_mult, std::uint64_t seed,
                                       int first_window = 400, int spacing = 200,
                                       int window_len = 40) {
    PlantedPanel out;
    out.window_len = window_len;
    out.panel.calendar = weekday_calendar("2005-01-03", n_days);
    out.panel.asset_names = {"AAA", "BBB"};

    std::vector<char> in_window(n_days, 0);
    for (int w = 0; w < n_windows; ++w) {
        const int start = first_window + w * spacing;
        if (start + window_len >= n_days) break;
        out.window_starts.push_back(start);
        for (int t = start; t < start + window_len; ++t) in_window[t] = 1;
        CrisisWindow cw;
        cw.name = "planted_" + std::to_string(w);
        cw.start = out.panel.calendar[start];
        cw.end = out.panel.calendar[start + window_len - 1];
        cw.category = w % 2 ? "Novel" : "Conventional";
        out.crises.push_back(cw);
    }

    SplitMix64 rng(seed);
    std::vector<double> p0 = {100.0}, p1 = {100.0};
    for (int t = 1; t < n_days; ++t) {
        const double sigma = in_window[t] ? calm_sigma * crisis_mult : calm_sigma;
        const double common = rng.gaussian();
        const double i0 = rng.gaussian(), i1 = rng.gaussian();
        const double r0 = sigma * (0.9 * common + 0.43589 * i0);
        const double r1 = sigma * (0.9 * common + 0.43589 * i1);
        p0.push_back(p0.back() * std::exp(r0));
        p1.push_back(p1.back() * std::exp(r1));
    }
    out.panel.adj_close = {p0, p1};
    out.panel.close = {p0, p1};
    return out;
}

inline void write_ohlcv_csv(const std::string& path, const std::vector<Date>& calendar,
                            const std::vector<double>& close) {
    std::ofstream out(path);
    out << "Date,Open,High,Low,Close,AdjClose,Volume\n";
    for (size_t t = 0; t < calendar.size(); ++t) {
        const double c = close[t];
        out << format_date(calendar[t]) << "," << c << "," << c << "," << c << "," << c << "," << c
            << ",1000\n";
    }
}

inline std::string temp_dir(const std::string& name) {
    const std::string dir = "qgd_test_tmp/" + name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace qgd::test
