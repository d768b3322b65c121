#pragma once

#include <string>
#include <utility>
#include <vector>

#include "series.hpp"

namespace qgd {

struct ScoreSeries {
    std::string name;
    std::vector<double> raw, smoothed, z;  // NaN marks undefined entries
    int w = 20;
    int m = 60;
};

// Causal expanding-window z-score. s(t) is the mean of the defined raw
// values over the trailing w days (prefix mean while t < w); z(t) uses the
// expanding one-pass moments of s over strictly past days and is defined
// from index m on. A floored sigma (< 1e-12) maps to z = 0 when s equals
// the expanding mean and to a clamped +-10 otherwise.
ScoreSeries causal_zscore(const std::vector<double>& raw, int w = 20, int m = 60,
                          const std::string& name = "");

struct AlarmEvent {
    int onset = 0;        // first above-threshold day of the (merged) event
    double peak_z = 0.0;
    int duration = 0;     // above-threshold days in the event
    std::string mechanism;
};

// Above-threshold runs separated by fewer than gap_days below-threshold
// days merge into one event. NaN days count as below threshold.
std::vector<AlarmEvent> extract_alarms(const std::vector<double>& z, double tau, int gap_days = 5);

// Smallest tau over the sorted unique normal z values whose alarm-event
// rate stays at or below alpha events per 252-day year. Crisis spans are
// half-open index pairs [first, last] removed before calibration.
double far_threshold(const std::vector<double>& z,
                     const std::vector<std::pair<int, int>>& crisis_spans, double alpha = 1.0,
                     int gap_days = 5);

// Rolling 95th-percentile threshold (trailing 252 days, 5-day exclusion
// gap, >= 3 consecutive exceedance days) OR z-scored score velocity above
// 2 sigma for >= 2 consecutive days. Both mechanisms build thresholds from
// strictly past data.
std::vector<AlarmEvent> adaptive_alarms(const ScoreSeries& s);

}  // namespace qgd
