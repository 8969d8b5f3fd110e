#pragma once

#include "nnspod/pod.hpp"
#include "nnspod/rbf.hpp"
#include "nnspod/shift.hpp"
#include "nnspod/snapshot_io.hpp"
#include "nnspod/testcases.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace nnspod {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CaseType { Gaussian, Vortex, Step, Files };
enum class TransformMode { Shift, Interp };

struct PipelineConfig {
    CaseType case_type = CaseType::Gaussian;
    GaussianWaveSpec gaussian;
    VortexSpec vortex;
    StepInterfaceSpec step;
    std::filesystem::path case_dir;          // type = files
    SnapshotFormat case_format = SnapshotFormat::Csv;

    SplitSpec split;

    double reference_param = 0.0;            // nearest training parameter
    long reference_index = -1;               // explicit train-set index wins when >= 0
    bool reference_by_index = false;

    ShiftTrainOptions train;
    std::array<bool, 2> shift_axes{true, false};

    TransformMode transform = TransformMode::Shift;

    PodOptions pod;
    RbfKernel rbf_kernel = RbfKernel::ThinPlate;
    double rbf_epsilon = 1.0;

    double extrapolation_guard = 0.1;

    std::filesystem::path output_dir = "run";
};

/// Built-in hyperparameter presets ("wave1d", "vortex2d", "twophase").
PipelineConfig preset(const std::string& name);

/// Applies `section.key = value` lines from a config file; unknown keys are
/// rejected. Later sources override earlier ones.
void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path);

/// Applies one `section.key=value` override.
void apply_override(PipelineConfig& cfg, const std::string& assignment);

/// Canonical text listing of every key (the reproducibility echo).
std::string canonical_config(const PipelineConfig& cfg);

/// FNV-1a hash of the canonical text.
std::uint64_t config_hash(const PipelineConfig& cfg);

/// Generates or ingests the configured snapshot database.
SnapshotSet build_case(const PipelineConfig& cfg);

} // namespace nnspod
