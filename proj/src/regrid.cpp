#include "nnspod/regrid.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace nnspod {

Eigen::VectorXd interp_line(const Eigen::VectorXd& nodes, const Eigen::VectorXd& values,
                            const Eigen::VectorXd& queries) {
    const long n = nodes.size();
    if (values.size() != n) throw std::invalid_argument("interp_line: length mismatch");
    Eigen::VectorXd out(queries.size());
    for (long q = 0; q < queries.size(); ++q) {
        const double x = queries[q];
        if (x <= nodes[0]) {
            out[q] = values[0];
            continue;
        }
        if (x >= nodes[n - 1]) {
            out[q] = values[n - 1];
            continue;
        }
        const double* begin = nodes.data();
        long hi = std::upper_bound(begin, begin + n, x) - begin;
        long lo = hi - 1;
        const double w = nodes[hi] > nodes[lo] ? (x - nodes[lo]) / (nodes[hi] - nodes[lo]) : 0.0;
        out[q] = values[lo] + w * (values[hi] - values[lo]);
    }
    return out;
}

Eigen::VectorXd regrid_line(const Eigen::VectorXd& knots, const Eigen::VectorXd& values,
                            const Eigen::VectorXd& targets, RegridWarnings* warnings) {
    const long n = knots.size();
    if (values.size() != n) throw std::invalid_argument("regrid_line: length mismatch");
    bool monotone = true;
    for (long i = 1; i < n && monotone; ++i) monotone = knots[i] > knots[i - 1];
    if (monotone) return interp_line(knots, values, targets);

    if (warnings) warnings->non_monotone = true;
    std::vector<long> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0L);
    std::stable_sort(order.begin(), order.end(),
                     [&](long a, long b) { return knots[a] < knots[b]; });
    Eigen::VectorXd k(n), v(n);
    for (long i = 0; i < n; ++i) {
        k[i] = knots[order[static_cast<size_t>(i)]];
        v[i] = values[order[static_cast<size_t>(i)]];
    }
    return interp_line(k, v, targets);
}

namespace {

Eigen::VectorXd transport_axis(const Grid& grid, const Eigen::VectorXd& field,
                               const Eigen::VectorXd& axis_shift, double sign, int axis,
                               RegridWarnings* warnings) {
    if (grid.dim() == 1) {
        const auto& nodes = grid.axis_nodes(0);
        return regrid_line(nodes + sign * axis_shift, field, nodes, warnings);
    }
    const int nx = grid.axis_size(0), ny = grid.axis_size(1);
    Eigen::VectorXd out(field.size());
    if (axis == 0) {
        const auto& xs = grid.axis_nodes(0);
        Eigen::VectorXd knots(nx), vals(nx);
        for (int iy = 0; iy < ny; ++iy) {
            for (int ix = 0; ix < nx; ++ix) {
                const long id = static_cast<long>(ix) * ny + iy;
                knots[ix] = xs[ix] + sign * axis_shift[id];
                vals[ix] = field[id];
            }
            Eigen::VectorXd line = regrid_line(knots, vals, xs, warnings);
            for (int ix = 0; ix < nx; ++ix) out[static_cast<long>(ix) * ny + iy] = line[ix];
        }
    } else {
        const auto& ys = grid.axis_nodes(1);
        Eigen::VectorXd knots(ny), vals(ny);
        for (int ix = 0; ix < nx; ++ix) {
            const long base = static_cast<long>(ix) * ny;
            for (int iy = 0; iy < ny; ++iy) {
                knots[iy] = ys[iy] + sign * axis_shift[base + iy];
                vals[iy] = field[base + iy];
            }
            Eigen::VectorXd line = regrid_line(knots, vals, ys, warnings);
            out.segment(base, ny) = line;
        }
    }
    return out;
}

} // namespace

Eigen::VectorXd transport_field(const Grid& grid, const Eigen::VectorXd& field,
                                const Eigen::MatrixXd& shift, double sign,
                                RegridWarnings* warnings) {
    if (field.size() != grid.size()) throw std::invalid_argument("transport_field: field/grid mismatch");
    if (shift.rows() != grid.size() || shift.cols() != grid.dim())
        throw std::invalid_argument("transport_field: shift shape mismatch");
    Eigen::VectorXd out = field;
    for (int a = 0; a < grid.dim(); ++a) {
        if ((shift.col(a).array() == 0.0).all()) continue;
        out = transport_axis(grid, out, shift.col(a), sign, a, warnings);
    }
    return out;
}

} // namespace nnspod
