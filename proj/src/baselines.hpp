#pragma once

#include "features.hpp"
#include "scoring.hpp"

namespace qgd {

// Classical unsupervised comparators. Every baseline emits a ScoreSeries
// whose z comes from the same causal expanding z-score as the geometric
// channels, so thresholds and effect sizes are directly comparable. The
// raw statistics are already windowed or integrated, so the z stage adds
// no further smoothing (w = 1).

struct BaselineConfig {
    std::string method;        // rolling_vol_z | cusum | absorption_ratio | turbulence
    int vol_window = 20;
    double cusum_k = 0.5;
    int burn_in = 60;
    int corr_window = 250;
    int min_history = 60;
    int m = 60;  // minimum expanding history for the z stage
};

// rolling sample std of returns over vol_window, then causal z
ScoreSeries rolling_vol_z(const std::vector<double>& returns, int vol_window = 20, int m = 60);

// one-sided standardized CUSUM on |u|, u standardized by burn-in moments
ScoreSeries cusum(const std::vector<double>& series, double k = 0.5, int burn_in = 60);

// top-eigenvalue variance fraction of the rolling return correlation matrix
ScoreSeries absorption_ratio(const RMatrix& returns, int corr_window = 250);

// expanding Mahalanobis distance with a ridge-regularized covariance
ScoreSeries turbulence(const FeatureMatrix& features, int min_history = 60);

ScoreSeries run_baseline(const BaselineConfig& cfg, const PricePanel& panel,
                         const FeatureMatrix& enriched);

}  // namespace qgd
