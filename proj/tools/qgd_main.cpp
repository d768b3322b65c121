// qgd command line: ingest OHLCV data, score geometric and classical
// channels, evaluate them against labeled crises, and validate the formal
// results. Everything goes through the public C API in qgd/qgd.h.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qgd/qgd.h"

namespace {

int exit_code_for(qgd_status st) {
    switch (st) {
        case QGD_OK: return 0;
        case QGD_ERR_INVALID: return 1;
        case QGD_ERR_IO: return 1;
        case QGD_ERR_NUMERICAL: return 2;
        case QGD_ERR_VALIDATION: return 3;
        default: return 2;
    }
}

struct ConfigHandle {
    qgd_config* cfg = nullptr;
    ~ConfigHandle() { qgd_config_destroy(cfg); }
};

int fail(qgd_status st) {
    std::fprintf(stderr, "qgd: %s\n", qgd_last_error());
    return exit_code_for(st);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometric regime detection over financial feature streams"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    std::string config_path;
    std::string output_dir;
    std::string seed_value;
    app.add_option("-c,--config", config_path, "JSON run configuration");
    app.add_option("-o,--output-dir", output_dir, "override the output directory");
    app.add_option("--seed", seed_value, "override the run seed");

    std::string strategy;
    bool hpo = false;
    double overlay_tau = -1.0;
    std::string overlay_channel;

    app.add_subcommand("features", "ingest OHLCV files and write the feature matrices");
    app.add_subcommand("score", "write per-channel and per-baseline score series");
    app.add_subcommand("evaluate", "offline crisis separability report");
    auto* wf = app.add_subcommand("walkforward", "expanding-window detection evaluation");
    wf->add_option("--strategy", strategy, "threshold strategy: fixed | far | adaptive");
    wf->add_flag("--hpo", hpo, "grid re-selection of channel settings per year");
    app.add_subcommand("validate", "numerical checks of the formal results");
    auto* ov = app.add_subcommand("overlay", "de-risking overlay backtest");
    ov->add_option("--tau", overlay_tau, "alarm threshold");
    ov->add_option("--channel", overlay_channel, "score series driving the overlay");

    CLI11_PARSE(app, argc, argv);

    ConfigHandle h;
    qgd_status st = config_path.empty() ? qgd_config_create(&h.cfg)
                                        : qgd_config_load(config_path.c_str(), &h.cfg);
    if (st != QGD_OK) return fail(st);

    if (const char* env_out = std::getenv("QGD_OUTPUT_DIR"); env_out && output_dir.empty())
        output_dir = env_out;
    if (!output_dir.empty()) {
        st = qgd_config_set(h.cfg, "output_dir", ("\"" + output_dir + "\"").c_str());
        if (st != QGD_OK) return fail(st);
    }
    if (!seed_value.empty()) {
        st = qgd_config_set(h.cfg, "seed", seed_value.c_str());
        if (st != QGD_OK) return fail(st);
    }
    if (!strategy.empty()) {
        st = qgd_config_set(h.cfg, "walkforward.strategy", ("\"" + strategy + "\"").c_str());
        if (st != QGD_OK) return fail(st);
    }
    if (hpo) {
        st = qgd_config_set(h.cfg, "walkforward.hpo", "true");
        if (st != QGD_OK) return fail(st);
    }
    if (overlay_tau >= 0.0) {
        st = qgd_config_set(h.cfg, "overlay.tau", std::to_string(overlay_tau).c_str());
        if (st != QGD_OK) return fail(st);
    }
    if (!overlay_channel.empty()) {
        st = qgd_config_set(h.cfg, "overlay.channel", ("\"" + overlay_channel + "\"").c_str());
        if (st != QGD_OK) return fail(st);
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "features") {
        st = qgd_run_features(h.cfg);
    } else if (sub == "score") {
        st = qgd_run_score(h.cfg);
    } else if (sub == "evaluate") {
        st = qgd_run_evaluate(h.cfg);
    } else if (sub == "walkforward") {
        st = qgd_run_walkforward(h.cfg);
    } else if (sub == "validate") {
        int ok = 0;
        st = qgd_run_validate(h.cfg, &ok);
        std::printf("validation: %s\n", ok ? "all checks passed" : "FAILED");
    } else if (sub == "overlay") {
        st = qgd_run_overlay(h.cfg);
    }

    if (st != QGD_OK) return fail(st);
    return 0;
}
