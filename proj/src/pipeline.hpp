#pragma once

#include <string>

#include "evaluation.hpp"

namespace qgd {

// Run configuration mirrors the JSON config file; CLI flags override fields
// after parsing. All stochastic steps key off `seed`.
struct RunConfig {
    std::uint64_t seed = 42;
    std::string output_dir = "out";
    std::vector<std::pair<std::string, std::string>> assets;  // name, csv path
    std::string crisis_file;                                  // empty -> builtin table
    int enrich_lookback = 20;

    std::vector<ChannelConfig> channels;
    std::vector<BaselineConfig> baselines;
    std::vector<std::pair<std::string, std::string>> imported_scores;  // name, csv path

    EvalOptions eval;
    int null_draws = 1000;
    std::string null_channel = "berry_rate";

    WalkForwardOptions wf;

    std::string overlay_channel = "berry_rate";
    double overlay_tau = 2.0;
    int overlay_cooldown = 60;

    int validate_qfi_points = 500;
    int validate_bound_points = 1500;
    int validate_sphere_grid = 40;
    int validate_gap_steps = 5000;
    double validate_eps = 1e-5;
};

RunConfig parse_run_config(const std::string& json_text, const std::string& origin);
RunConfig load_run_config(const std::string& path);

// dotted-key override with a JSON-encoded value, e.g. ("walkforward.strategy", "\"fixed\"")
void apply_override(RunConfig& cfg, const std::string& dotted_key, const std::string& json_value);

RunConfig default_run_config();

void run_features(const RunConfig& cfg);
void run_score(const RunConfig& cfg);
void run_evaluate(const RunConfig& cfg);
void run_walkforward(const RunConfig& cfg);
bool run_validate(const RunConfig& cfg);  // false when a check fails
void run_overlay(const RunConfig& cfg);

// score CSV schema shared by producers and the importer: date,raw,smoothed,z,flag
void write_score_csv(const std::string& path, const std::vector<Date>& calendar,
                     const ScoreSeries& s);

std::vector<double> read_imported_scores(const std::string& path, const std::vector<Date>& calendar);

void write_score_svg(const std::string& path, const std::vector<Date>& calendar,
                     const std::vector<double>& z, const std::vector<CrisisSpan>& spans,
                     const std::string& title);

// formal-guarantee checks, reused by the acceptance suite
struct ValidationReport {
    double qfi_pearson_r = 0.0;
    double qfi_rmse = 0.0;
    bool qfi_pass = false;
    double bound_fraction_satisfied = 0.0;
    double bound_max_ratio = 0.0;
    bool bound_pass = false;
    double chern_value = 0.0;
    double chern_reversed = 0.0;
    bool chern_pass = false;
    double min_gap = 0.0;
    int degenerate_steps = 0;
    bool gap_pass = false;
    bool all_pass = false;
};

ValidationReport validate_formal_checks(int qfi_points, int bound_points, int sphere_grid, int gap_steps,
                                   double eps, std::uint64_t seed);

// two-level oracle: ground state of -(sin t cos p X + sin t sin p Y + cos t Z)
CVector bloch_ground_state(double theta, double phi);

}  // namespace qgd
