#pragma once

#include "nnspod/pod.hpp"
#include "nnspod/rbf.hpp"
#include "nnspod/shift.hpp"

#include <filesystem>

namespace nnspod {

/// Complete reduced model: truncated basis over the scaled reference-frame
/// manifold, parameter-to-coefficient regression, and the shift model that
/// moves predictions back to the physical frame.
struct RomModel {
    Grid grid;
    PodBasis basis;
    Eigen::MatrixXd coefficients;   // r x N_train
    RbfMap rbf;
    ShiftModel shift;
    std::string field_name;
    double extrapolation_guard = 0.1;   // scaled-parameter band beyond [0,1]
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
};

struct Prediction {
    Eigen::VectorXd field;      // physical frame
    bool extrapolated = false;  // parameter fell outside the guard band
};

/// Online evaluation: coefficients from the regression, reference-frame field
/// from the basis, unscale, then inverse shift into the physical frame.
Prediction predict(const RomModel& model, const Eigen::VectorXd& param);

/// Relative L2 error ||u - v|| / ||u||; the truth u must not vanish.
double rel_l2(const Eigen::VectorXd& truth, const Eigen::VectorXd& approx);

struct SpectrumReport {
    Eigen::VectorXd raw;          // sigma_k / sigma_1 of the untransformed manifold
    Eigen::VectorXd transformed;  // same for the transformed manifold
};

/// Normalized singular-value decay of both manifolds (columns = snapshots).
SpectrumReport spectrum_report(const Eigen::MatrixXd& raw_columns,
                               const Eigen::MatrixXd& transformed_columns);

void write_spectrum_csv(const SpectrumReport& report, const std::filesystem::path& path);

void save_rom(const RomModel& model, const std::filesystem::path& path);
RomModel load_rom(const std::filesystem::path& path);

} // namespace nnspod
