#pragma once

#include "nnspod/config.hpp"
#include "nnspod/rom.hpp"

#include <optional>

namespace nnspod {

struct PhaseTimes {
    double generate = 0.0;
    double interp = 0.0;
    double shift = 0.0;
    double transform = 0.0;
    double rom = 0.0;
    double errors = 0.0;
};

struct OfflineResult {
    RomModel model;
    SnapshotSet train;
    SnapshotSet test;
    SpectrumReport spectrum;
    Eigen::VectorXd train_errors;      // closure rel-L2 per training parameter
    PhaseTimes seconds;
};

/// Offline stage: generate/ingest, split, train both networks, transform the
/// training manifold, build basis + regression, evaluate closure errors.
OfflineResult run_offline(const PipelineConfig& cfg);

/// Persists rom.srom, config.echo.txt, spectrum.csv, train_errors.csv and
/// offline_report.txt under cfg.output_dir.
void write_offline_outputs(const OfflineResult& result, const PipelineConfig& cfg);

struct OnlineRow {
    Eigen::VectorXd param;
    Eigen::VectorXd field;
    std::optional<double> error;      // present when truth was available
    bool extrapolated = false;
};

struct OnlineResult {
    std::vector<OnlineRow> rows;
    std::optional<double> mean_train_error;
    std::optional<double> mean_test_error;
    bool config_hash_match = true;
    double seconds = 0.0;
};

enum class OnlineSplit { Test, Train, All };

/// Online stage against a persisted model: predictions for an explicit
/// parameter list, or for a split of the configured database (with truth
/// errors).
OnlineResult run_online(const RomModel& model, const std::vector<Eigen::VectorXd>& params);
OnlineResult run_online_with_truth(const RomModel& model, const PipelineConfig& cfg,
                                   OnlineSplit which);

void write_online_outputs(const OnlineResult& result, const RomModel& model,
                          const std::filesystem::path& out_dir);

/// Merges the run artifacts of one directory into summary.md / summary.csv.
/// Returns the list of missing artifacts (empty on success).
std::vector<std::string> write_run_summary(const std::filesystem::path& run_dir);

} // namespace nnspod
