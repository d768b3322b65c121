#include "scoring.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace qgd {

namespace {

constexpr double kSigmaFloor = 1e-12;
constexpr double kZMax = 10.0;

double floored_z(double s, double mu, double sigma) {
    if (sigma < kSigmaFloor) {
        if (std::abs(s - mu) <= 1e-12 * std::max(1.0, std::abs(mu))) return 0.0;
        return s > mu ? kZMax : -kZMax;
    }
    return (s - mu) / sigma;
}

}  // namespace

ScoreSeries causal_zscore(const std::vector<double>& raw, int w, int m, const std::string& name) {
    if (w < 1) throw Error(Errc::invalid_argument, "causal_zscore: w must be >= 1");
    if (m < 2) throw Error(Errc::invalid_argument, "causal_zscore: m must be >= 2");
    const int t_len = static_cast<int>(raw.size());
    ScoreSeries out;
    out.name = name;
    out.w = w;
    out.m = m;
    out.raw = raw;
    out.smoothed.assign(t_len, nan_value());
    out.z.assign(t_len, nan_value());

    for (int t = 0; t < t_len; ++t) {
        double sum = 0.0;
        int count = 0;
        for (int i = std::max(0, t - w + 1); i <= t; ++i) {
            if (!is_defined(raw[i])) continue;
            sum += raw[i];
            ++count;
        }
        if (count > 0) out.smoothed[t] = sum / count;
    }

    // expanding Welford moments of the smoothed series, strictly past
    double mean = 0.0, m2 = 0.0;
    long k = 0;
    for (int t = 0; t < t_len; ++t) {
        const double s = out.smoothed[t];
        if (t >= m && is_defined(s) && k >= 2) {
            const double var = std::max(0.0, m2 / (k - 1));
            out.z[t] = floored_z(s, mean, std::sqrt(var));
        }
        if (is_defined(s)) {
            ++k;
            const double d1 = s - mean;
            mean += d1 / k;
            m2 += d1 * (s - mean);
        }
    }
    return out;
}

std::vector<AlarmEvent> extract_alarms(const std::vector<double>& z, double tau, int gap_days) {
    std::vector<AlarmEvent> events;
    int last_above = -1;
    for (int t = 0; t < static_cast<int>(z.size()); ++t) {
        const bool above = is_defined(z[t]) && z[t] > tau;
        if (!above) continue;
        const bool merge = !events.empty() && last_above >= 0 && (t - last_above - 1) < gap_days;
        if (merge) {
            events.back().duration += 1;
            events.back().peak_z = std::max(events.back().peak_z, z[t]);
        } else {
            events.push_back(AlarmEvent{t, z[t], 1, ""});
        }
        last_above = t;
    }
    return events;
}

double far_threshold(const std::vector<double>& z,
                     const std::vector<std::pair<int, int>>& crisis_spans, double alpha,
                     int gap_days) {
    std::vector<double> normal;  // order-preserving, NaN kept as below-threshold filler
    int defined_count = 0;
    for (int t = 0; t < static_cast<int>(z.size()); ++t) {
        bool in_crisis = false;
        for (const auto& [a, b] : crisis_spans)
            if (t >= a && t <= b) {
                in_crisis = true;
                break;
            }
        if (in_crisis) continue;
        normal.push_back(z[t]);
        if (is_defined(z[t])) ++defined_count;
    }
    if (defined_count < 252)
        throw Error(Errc::invalid_argument,
                    "far_threshold: only " + std::to_string(defined_count) +
                        " normal points after removing crises (need >= 252)");

    std::vector<double> candidates;
    for (double v : normal)
        if (is_defined(v)) candidates.push_back(v);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    const double years = static_cast<double>(defined_count) / 252.0;
    auto rate_ok = [&](double tau) {
        const double rate = static_cast<double>(extract_alarms(normal, tau, gap_days).size()) / years;
        return rate <= alpha;
    };

    // Event merging makes the rate non-monotone at very low thresholds (the
    // whole series collapses into one event), so a plain binary search can
    // land on a useless answer. Scan the sorted candidates from the top:
    // the result is the smallest tau that satisfies the target together
    // with every threshold above it.
    const int top = static_cast<int>(candidates.size()) - 1;
    if (!rate_ok(candidates[top]))
        throw Error(Errc::numerical, "far_threshold: no threshold attains the target rate");
    int lo = top;
    while (lo > 0 && rate_ok(candidates[lo - 1])) --lo;
    return candidates[lo];
}

namespace {

// interpolated percentile of the defined values in [first, last]
double trailing_quantile(const std::vector<double>& z, int first, int last, double q, int min_count) {
    std::vector<double> w;
    for (int i = std::max(0, first); i <= last; ++i)
        if (is_defined(z[i])) w.push_back(z[i]);
    if (static_cast<int>(w.size()) < min_count) return nan_value();
    std::sort(w.begin(), w.end());
    const double pos = q * (static_cast<double>(w.size()) - 1);
    const size_t lo = static_cast<size_t>(pos);
    if (lo + 1 >= w.size()) return w.back();
    const double frac = pos - static_cast<double>(lo);
    return w[lo] + frac * (w[lo + 1] - w[lo]);
}

std::vector<AlarmEvent> events_from_active(const std::vector<char>& active,
                                           const std::vector<double>& z, int gap_days,
                                           const std::string& tag) {
    std::vector<AlarmEvent> events;
    int last_active = -1;
    for (int t = 0; t < static_cast<int>(active.size()); ++t) {
        if (!active[t]) continue;
        const bool merge = !events.empty() && last_active >= 0 && (t - last_active - 1) < gap_days;
        if (merge) {
            events.back().duration += 1;
            if (is_defined(z[t])) events.back().peak_z = std::max(events.back().peak_z, z[t]);
        } else {
            events.push_back(AlarmEvent{t, is_defined(z[t]) ? z[t] : 0.0, 1, tag});
        }
        last_active = t;
    }
    return events;
}

}  // namespace

std::vector<AlarmEvent> adaptive_alarms(const ScoreSeries& s) {
    const int t_len = static_cast<int>(s.z.size());
    if (t_len <= 257)
        throw Error(Errc::invalid_argument, "adaptive_alarms: need more than 252 + 5 days");

    // (i) trailing 252-day 95th percentile, 5-day exclusion gap, 3-day run
    std::vector<char> exceed_q(t_len, 0);
    for (int t = 0; t < t_len; ++t) {
        if (!is_defined(s.z[t])) continue;
        const double thr = trailing_quantile(s.z, t - 5 - 252 + 1, t - 5, 0.95, 100);
        if (is_defined(thr) && s.z[t] > thr) exceed_q[t] = 1;
    }
    std::vector<char> active_q(t_len, 0);
    for (int t = 2; t < t_len; ++t)
        active_q[t] = exceed_q[t] && exceed_q[t - 1] && exceed_q[t - 2];

    // (ii) z-scored velocity of the smoothed score above 2 sigma, 2-day run
    std::vector<char> exceed_v(t_len, 0);
    {
        double sum = 0.0, sumsq = 0.0;
        long k = 0;
        for (int t = 1; t < t_len; ++t) {
            const bool ok = is_defined(s.smoothed[t]) && is_defined(s.smoothed[t - 1]);
            const double v = ok ? s.smoothed[t] - s.smoothed[t - 1] : nan_value();
            if (ok && k >= 30) {
                const double mu = sum / k;
                const double var = std::max(0.0, (sumsq - sum * sum / k) / (k - 1));
                const double sigma = std::sqrt(var);
                if (sigma >= 1e-12 && (v - mu) / sigma > 2.0) exceed_v[t] = 1;
            }
            if (ok) {
                sum += v;
                sumsq += v * v;
                ++k;
            }
        }
    }
    std::vector<char> active_v(t_len, 0);
    for (int t = 1; t < t_len; ++t) active_v[t] = exceed_v[t] && exceed_v[t - 1];

    std::vector<char> active(t_len, 0);
    for (int t = 0; t < t_len; ++t) active[t] = active_q[t] || active_v[t];
    std::vector<AlarmEvent> events = events_from_active(active, s.z, 5, "");
    for (auto& e : events) e.mechanism = active_q[e.onset] ? "quantile" : "velocity";
    return events;
}

}  // namespace qgd
