#pragma once

#include "nnspod/grid.hpp"

#include <Eigen/Core>
#include <array>

namespace nnspod {

struct RegridWarnings {
    bool non_monotone = false;   // shifted 1D knots needed a stable-sort fallback
};

/// Piecewise-linear evaluation of the samples (knots, values) at `targets`.
/// Knots arrive in original node order; a non-monotone sequence is stably
/// sorted (and flagged). Queries outside the knot range take the edge value.
Eigen::VectorXd regrid_line(const Eigen::VectorXd& knots, const Eigen::VectorXd& values,
                            const Eigen::VectorXd& targets, RegridWarnings* warnings = nullptr);

/// Piecewise-linear interpolant of (nodes, values) evaluated at `queries`,
/// with edge-value fill; nodes must be sorted ascending.
Eigen::VectorXd interp_line(const Eigen::VectorXd& nodes, const Eigen::VectorXd& values,
                            const Eigen::VectorXd& queries);

/// Moves `field` through per-node displacements: node x contributes its value
/// at x + sign * shift(x), and the result is interpolated back onto the grid.
/// 2D grids are handled axis by axis (exact for per-axis-constant shifts);
/// axes with an all-zero shift column are skipped.
Eigen::VectorXd transport_field(const Grid& grid, const Eigen::VectorXd& field,
                                const Eigen::MatrixXd& shift, double sign,
                                RegridWarnings* warnings = nullptr);

} // namespace nnspod
