#pragma once

#include <Eigen/Core>
#include <array>
#include <stdexcept>
#include <vector>

namespace nnspod {

/// Coordinates of a discretized spatial domain shared by all snapshots of a
/// set. 1D grids are arbitrary sorted node lists; 2D grids are structured
/// (row-major tensor product of per-axis node vectors, x fastest-varying in
/// the axis sense: index = ix * ny + iy).
class Grid {
public:
    static Grid line(const Eigen::VectorXd& nodes);
    static Grid uniform_line(double lo, double hi, int n);
    static Grid structured(const Eigen::VectorXd& x_nodes, const Eigen::VectorXd& y_nodes);
    /// Cell-centered uniform 2D grid on [0,lx]x[0,ly].
    static Grid cell_centered(double lx, double ly, int nx, int ny);

    int dim() const { return dim_; }
    long size() const { return coords_.rows(); }

    /// size() x dim() matrix, one coordinate row per node.
    const Eigen::MatrixXd& coords() const { return coords_; }

    double bound_min(int axis) const { return bounds_min_[axis]; }
    double bound_max(int axis) const { return bounds_max_[axis]; }
    double extent(int axis) const { return bounds_max_[axis] - bounds_min_[axis]; }

    /// Per-axis node vector of a structured grid (1D: axis 0 is the node list).
    const Eigen::VectorXd& axis_nodes(int axis) const;
    int axis_size(int axis) const { return static_cast<int>(axis_nodes(axis).size()); }

    bool operator==(const Grid& other) const;

private:
    Grid() = default;
    void finalize();

    int dim_ = 0;
    Eigen::MatrixXd coords_;
    std::vector<Eigen::VectorXd> axes_;
    std::array<double, 2> bounds_min_{0.0, 0.0};
    std::array<double, 2> bounds_max_{0.0, 0.0};
};

} // namespace nnspod
