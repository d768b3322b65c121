#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dates.hpp"
#include "series.hpp"

namespace qgd {

struct PricePanel {
    std::vector<Date> calendar;             // strictly increasing, common to all assets
    std::vector<std::string> asset_names;
    std::vector<std::vector<double>> adj_close;  // per asset, aligned to calendar
    std::vector<std::vector<double>> close;

    int size() const { return static_cast<int>(calendar.size()); }
    int index_on_or_after(Date d) const;   // -1 when past the end
    int index_on_or_before(Date d) const;  // -1 when before the start
};

// CSV per asset with header Date,Open,High,Low,Close,AdjClose,Volume.
// The panel keeps the intersection calendar; any date missing a close in
// one file is dropped from all assets.
PricePanel load_ohlcv(const std::vector<std::pair<std::string, std::string>>& name_paths);

struct FeatureMatrix {
    RMatrix values;  // T x F, NaN before valid_from
    std::vector<std::string> names;
    int valid_from = 0;
};

// 13 raw columns for a two-asset panel: per-asset log return, 5/20d rolling
// volatility, 5/20d momentum; cross: 20d return correlation, 5/20d rolling
// mean of |r0 - r1|.
FeatureMatrix raw_features(const PricePanel& panel);

// rolling mean/std/min/max per raw column over `lookback` days -> 4F columns
FeatureMatrix enrich(const FeatureMatrix& raw, int lookback = 20);

struct Preprocessor {
    std::vector<double> mean, stdev;   // per input column
    RMatrix loadings;                  // F x p, orthonormal columns
    std::vector<double> eigenvalues;   // descending, length p
    int fitted_through = 0;            // causal cutoff row
    int input_valid_from = 0;
};

// Standardization moments and PCA basis from rows [valid_from, cutoff_index].
// Loadings carry a fixed sign convention: largest-|entry| component positive.
Preprocessor fit_preprocessor(const FeatureMatrix& features, int cutoff_index, int p);

// standardize -> project -> unit-normalize each row; zero rows stay zero and
// are excluded via the defined mask
EmbeddedSeries transform(const Preprocessor& prep, const FeatureMatrix& features);

}  // namespace qgd
