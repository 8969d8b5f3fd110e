#include "nnspod/testcases.hpp"

#include <cmath>
#include <numbers>

namespace nnspod {

SnapshotSet gen_gaussian(const GaussianWaveSpec& spec) {
    if (spec.sigma <= 0.0) throw std::invalid_argument("gen_gaussian: sigma must be positive");
    if (spec.n_nodes < 2) throw std::invalid_argument("gen_gaussian: need at least 2 nodes");
    if (spec.n_params < 1) throw std::invalid_argument("gen_gaussian: need at least 1 parameter");

    Grid grid = Grid::uniform_line(spec.x_min, spec.x_max, spec.n_nodes);
    Eigen::MatrixXd params(spec.n_params, 1);
    Eigen::MatrixXd fields(spec.n_params, spec.n_nodes);
    const double inv2s2 = 1.0 / (2.0 * spec.sigma * spec.sigma);
    for (int i = 0; i < spec.n_params; ++i) {
        const double t = spec.t_first + spec.t_step * i;
        params(i, 0) = t;
        for (int j = 0; j < spec.n_nodes; ++j) {
            const double d = grid.coords()(j, 0) - t;
            fields(i, j) = spec.alpha * std::exp(-d * d * inv2s2);
        }
    }
    return SnapshotSet(std::move(grid), std::move(params), std::move(fields), "wave");
}

double vortex_density_at(const VortexSpec& spec, double r) {
    const double g = spec.gamma;
    const double coeff = (g - 1.0) * spec.b * spec.b / (8.0 * g * std::numbers::pi * std::numbers::pi);
    return std::pow(1.0 - coeff * std::exp(1.0 - r * r), 1.0 / (g - 1.0));
}

SnapshotSet gen_vortex_density(const VortexSpec& spec) {
    if (spec.gamma <= 1.0) throw std::invalid_argument("gen_vortex: gamma must exceed 1");
    if (spec.b <= 0.0) throw std::invalid_argument("gen_vortex: vortex strength must be positive");
    if (spec.nx < 2 || spec.ny < 2) throw std::invalid_argument("gen_vortex: bad cell counts");
    if (spec.n_snapshots < 1) throw std::invalid_argument("gen_vortex: need at least 1 snapshot");

    Grid grid = Grid::cell_centered(spec.domain_x, spec.domain_y, spec.nx, spec.ny);
    const long n = grid.size();
    Eigen::MatrixXd params(spec.n_snapshots, 1);
    Eigen::MatrixXd fields(spec.n_snapshots, n);
    for (int i = 0; i < spec.n_snapshots; ++i) {
        const double t = spec.dt * (i + 1);
        params(i, 0) = t;
        const double cx = spec.center_x + spec.u_inf * t;
        const double cy = spec.center_y + spec.v_inf * t;
        for (long j = 0; j < n; ++j) {
            const double dx = grid.coords()(j, 0) - cx;
            const double dy = grid.coords()(j, 1) - cy;
            fields(i, j) = vortex_density_at(spec, std::sqrt(dx * dx + dy * dy));
        }
    }
    return SnapshotSet(std::move(grid), std::move(params), std::move(fields), "density");
}

SnapshotSet gen_step_interface(const StepInterfaceSpec& spec) {
    if (spec.sharpness <= 0.0) throw std::invalid_argument("gen_step: sharpness must be positive");
    if (spec.n_nodes < 2) throw std::invalid_argument("gen_step: need at least 2 nodes");
    if (spec.n_params < 1) throw std::invalid_argument("gen_step: need at least 1 parameter");
    const double h_lo = std::min(spec.h_first, spec.h_last);
    const double h_hi = std::max(spec.h_first, spec.h_last);
    if (h_lo <= 0.0 || h_hi >= 1.0)
        throw std::invalid_argument("gen_step: interface positions must lie inside (0,1)");

    Grid grid = Grid::uniform_line(0.0, 1.0, spec.n_nodes);
    Eigen::MatrixXd params(spec.n_params, 1);
    Eigen::MatrixXd fields(spec.n_params, spec.n_nodes);
    for (int i = 0; i < spec.n_params; ++i) {
        const double s = spec.n_params == 1 ? 0.0 : static_cast<double>(i) / (spec.n_params - 1);
        const double h = spec.h_first + (spec.h_last - spec.h_first) * s;
        params(i, 0) = s;
        for (int j = 0; j < spec.n_nodes; ++j) {
            const double y = grid.coords()(j, 0);
            fields(i, j) = 0.5 * (1.0 + std::tanh((h - y) / spec.sharpness));
        }
    }
    return SnapshotSet(std::move(grid), std::move(params), std::move(fields), "alpha");
}

} // namespace nnspod
