#pragma once

#include <cstdint>

#include "baselines.hpp"
#include "observables.hpp"
#include "stats.hpp"

namespace qgd {

struct CrisisWindow {
    std::string name;
    Date start = 0;
    Date end = 0;
    std::string category;  // Conventional | Novel
};

std::vector<CrisisWindow> load_crises(const std::string& path);
std::vector<CrisisWindow> builtin_crises();

// Trading-day index span of a crisis window extended by +-extension trading
// days and clipped to the calendar.
struct CrisisSpan {
    int first = 0;
    int last = -1;  // inclusive; empty when last < first
    int start_idx = 0;  // unextended crisis start (delay reference)
};

CrisisSpan crisis_span(const PricePanel& panel, const CrisisWindow& cw, int extension_days = 10);

bool in_any_span(int t, const std::vector<CrisisSpan>& spans);

// One comparator in the evaluation: a geometric channel, a classical
// baseline, or an externally produced score imported from CSV.
struct MethodSpec {
    enum class Kind { channel, baseline, imported };
    Kind kind = Kind::channel;
    std::string name;
    ChannelConfig channel;
    BaselineConfig baseline;
    std::vector<double> imported_z;  // aligned to the panel calendar
};

// Fit preprocessing and operators through fit_idx, then score the full
// timeline. z is oriented so that high score = stress (config sign).
ScoreSeries channel_score(const FeatureMatrix& enriched, const ChannelConfig& cfg, int fit_idx);

OperatorSet build_operators(const ChannelConfig& cfg, const std::vector<double>& pca_eigenvalues);

struct EffectSizeResult {
    std::string method, crisis;
    double d = 0.0, delta = 0.0, ci_lo = 0.0, ci_hi = 0.0;
    int n_crisis = 0, n_normal = 0;
    double p_welch = 1.0, p_welch_holm = 1.0, p_permutation = 1.0;
    bool defined = false;
    bool skipped = false;
    std::string note;
};

struct EvalOptions {
    int extension_days = 10;       // trading days, applied to each window
    int cutoff_calendar_days = 10; // causal cutoff before crisis start
    int bootstrap_resamples = 10000;
    int n_permutations = 5000;
    std::uint64_t seed = 42;
};

struct EvalReport {
    std::vector<std::string> methods;
    std::vector<std::string> crises;
    std::vector<EffectSizeResult> cells;  // methods x crises, method-major
    std::vector<double> median_d;         // per method
    std::vector<double> mean_ranks;       // per method over complete crises
    FriedmanResult friedman;
    int n_rank_crises = 0;
};

// Offline separability protocol: per crisis, preprocessing and operators
// refit on data before the causal cutoff; effect sizes compare the extended
// crisis window against all days outside every extended window.
EvalReport crisis_separability(const PricePanel& panel, const FeatureMatrix& enriched,
                               const std::vector<MethodSpec>& methods,
                               const std::vector<CrisisWindow>& crises, const EvalOptions& opts);

// median Cohen's d of in-span vs out-of-all-spans score values
double median_d_for_spans(const std::vector<double>& z, const std::vector<CrisisSpan>& spans);

std::vector<double> circular_shift(const std::vector<double>& v, int offset);

struct NullModelResult {
    double real_median_d = 0.0;
    std::vector<double> null_shift;    // circular-shift null distribution
    std::vector<double> null_windows;  // random-placement null distribution
    double percentile_shift = 0.0, percentile_windows = 0.0;
    double p_shift = 1.0, p_windows = 1.0;
};

NullModelResult null_models(const std::vector<double>& z, const std::vector<CrisisSpan>& spans,
                            int n_draws = 1000, std::uint64_t seed = 42);

struct WalkForwardOptions {
    Date train_start = 0;          // 0 -> calendar start
    int first_eval_year = 0;       // 0 -> auto from min_train_days
    int last_eval_year = 0;        // 0 -> last calendar year
    std::string strategy = "far";  // fixed | far | adaptive
    double fixed_tau = 2.0;
    double far_alpha = 1.0;
    int min_train_days = 756;
    bool hpo = false;
    int extension_days = 10;
    int cutoff_calendar_days = 10;
};

struct WfCrisisResult {
    std::string method, crisis, strategy;
    int year = 0;
    bool detected = false;
    int delay = -1;  // trading days, -1 when never detected
    double oos_d = 0.0;
    bool oos_d_defined = false;
};

struct WfYearResult {
    std::string method;
    int year = 0;
    int n_false_alarms = 0;
    double far_events = 0.0;      // false alarm events per 252-day year
    double exceedance_rate = 0.0; // per-point rate; NaN under adaptive thresholds
    double threshold = 0.0;       // NaN under adaptive thresholds
    std::string hpo_config;
    bool hpo_fallback = false;
    std::string note;
};

struct WalkForwardReport {
    std::vector<WfCrisisResult> crisis_results;
    std::vector<WfYearResult> year_results;
};

// Expanding-window evaluation with monthly in-year refits; fits only ever
// see data before the day being scored. Optional grid HPO re-selects the
// channel configuration each year from crises that ended before it.
WalkForwardReport walk_forward(const PricePanel& panel, const FeatureMatrix& enriched,
                               const std::vector<MethodSpec>& methods,
                               const std::vector<CrisisWindow>& crises,
                               const WalkForwardOptions& opts);

struct OverlayResult {
    double total_return = 0.0;
    double annualized_sharpe = 0.0;
    double max_drawdown = 0.0;  // most negative peak-to-trough, e.g. -0.55
    double time_in_cash = 0.0;
    int n_exits = 0;
    double bh_total_return = 0.0;
    double bh_sharpe = 0.0;
    double bh_max_drawdown = 0.0;
};

// Long by default; a z > tau close sends the next cooldown trading days to
// cash (retriggerable after expiry). Cash earns zero.
OverlayResult overlay_backtest(const std::vector<double>& prices, const std::vector<double>& z,
                               double tau = 2.0, int cooldown = 60);

}  // namespace qgd
