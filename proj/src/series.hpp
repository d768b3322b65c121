#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace qgd {

inline double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_defined(double v) { return !std::isnan(v); }

// Embedded feature series: one unit-norm p-vector per trading day. Rows
// before the feature warm-up (or flagged zero rows) are undefined.
struct EmbeddedSeries {
    RMatrix x;                  // T x p
    std::vector<char> defined;  // per row

    int size() const { return x.rows(); }
    std::vector<double> row(int t) const {
        std::vector<double> r(x.cols());
        for (int j = 0; j < x.cols(); ++j) r[j] = x(t, j);
        return r;
    }
};

// Raw observable values aligned to the trading calendar; NaN marks entries
// where lags or numerical preconditions leave the value undefined.
struct RawSeries {
    std::string channel;
    std::vector<double> values;
};

}  // namespace qgd
