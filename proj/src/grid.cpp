#include "nnspod/grid.hpp"

namespace nnspod {

Grid Grid::line(const Eigen::VectorXd& nodes) {
    if (nodes.size() < 2) throw std::invalid_argument("Grid: need at least 2 nodes");
    for (long i = 1; i < nodes.size(); ++i)
        if (nodes[i] <= nodes[i - 1])
            throw std::invalid_argument("Grid: 1D nodes must be strictly increasing");
    Grid g;
    g.dim_ = 1;
    g.axes_ = {nodes};
    g.coords_ = nodes;
    g.finalize();
    return g;
}

Grid Grid::uniform_line(double lo, double hi, int n) {
    if (n < 2) throw std::invalid_argument("Grid: need at least 2 nodes");
    return line(Eigen::VectorXd::LinSpaced(n, lo, hi));
}

Grid Grid::structured(const Eigen::VectorXd& x_nodes, const Eigen::VectorXd& y_nodes) {
    if (x_nodes.size() < 2 || y_nodes.size() < 2)
        throw std::invalid_argument("Grid: need at least 2 nodes per axis");
    Grid g;
    g.dim_ = 2;
    g.axes_ = {x_nodes, y_nodes};
    const long nx = x_nodes.size(), ny = y_nodes.size();
    g.coords_.resize(nx * ny, 2);
    for (long ix = 0; ix < nx; ++ix)
        for (long iy = 0; iy < ny; ++iy) {
            g.coords_(ix * ny + iy, 0) = x_nodes[ix];
            g.coords_(ix * ny + iy, 1) = y_nodes[iy];
        }
    g.finalize();
    return g;
}

Grid Grid::cell_centered(double lx, double ly, int nx, int ny) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("Grid: need at least 2 cells per axis");
    const double dx = lx / nx, dy = ly / ny;
    Eigen::VectorXd xs(nx), ys(ny);
    for (int i = 0; i < nx; ++i) xs[i] = (i + 0.5) * dx;
    for (int j = 0; j < ny; ++j) ys[j] = (j + 0.5) * dy;
    return structured(xs, ys);
}

void Grid::finalize() {
    for (int a = 0; a < dim_; ++a) {
        bounds_min_[a] = axes_[a].minCoeff();
        bounds_max_[a] = axes_[a].maxCoeff();
    }
}

const Eigen::VectorXd& Grid::axis_nodes(int axis) const {
    if (axis < 0 || axis >= dim_) throw std::out_of_range("Grid: axis out of range");
    return axes_[static_cast<size_t>(axis)];
}

bool Grid::operator==(const Grid& other) const {
    if (dim_ != other.dim_ || coords_.rows() != other.coords_.rows()) return false;
    return coords_ == other.coords_;
}

} // namespace nnspod
