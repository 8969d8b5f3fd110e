#include "nnspod/rbf.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace nnspod {

RbfKernel rbf_kernel_from_name(const std::string& name) {
    if (name == "thin_plate") return RbfKernel::ThinPlate;
    if (name == "gaussian") return RbfKernel::Gaussian;
    if (name == "multiquadric") return RbfKernel::Multiquadric;
    throw std::invalid_argument("unknown RBF kernel: " + name);
}

std::string rbf_kernel_name(RbfKernel k) {
    switch (k) {
        case RbfKernel::ThinPlate: return "thin_plate";
        case RbfKernel::Gaussian: return "gaussian";
        case RbfKernel::Multiquadric: return "multiquadric";
    }
    return "thin_plate";
}

double RbfMap::kernel_value(double r) const {
    switch (kernel_) {
        case RbfKernel::ThinPlate: return r > 0.0 ? r * r * std::log(r) : 0.0;
        case RbfKernel::Gaussian: {
            const double er = epsilon_ * r;
            return std::exp(-er * er);
        }
        case RbfKernel::Multiquadric: {
            const double er = epsilon_ * r;
            return std::sqrt(1.0 + er * er);
        }
    }
    return 0.0;
}

RbfMap RbfMap::fit(const Eigen::MatrixXd& centers, const Eigen::MatrixXd& values,
                   RbfKernel kernel, double epsilon) {
    const long n = centers.rows();
    if (n < 2) throw std::invalid_argument("RbfMap: need at least 2 centers");
    if (values.rows() != n) throw std::invalid_argument("RbfMap: centers/values row mismatch");
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j)
            if ((centers.row(i) - centers.row(j)).norm() == 0.0)
                throw std::invalid_argument("RbfMap: duplicate centers make the system singular");

    RbfMap map;
    map.kernel_ = kernel;
    map.epsilon_ = epsilon;
    map.poly_tail_ = (kernel == RbfKernel::ThinPlate);
    map.centers_ = centers;

    const long p = centers.cols();
    const long tail = map.poly_tail_ ? 1 + p : 0;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + tail, n + tail);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            A(i, j) = map.kernel_value((centers.row(i) - centers.row(j)).norm());
    if (tail > 0) {
        for (long i = 0; i < n; ++i) {
            A(i, n) = 1.0;
            A(n, i) = 1.0;
            for (long k = 0; k < p; ++k) {
                A(i, n + 1 + k) = centers(i, k);
                A(n + 1 + k, i) = centers(i, k);
            }
        }
    }
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + tail, values.cols());
    rhs.topRows(n) = values;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible())
        throw std::runtime_error("RbfMap: singular interpolation system (degenerate centers)");
    map.weights_ = lu.solve(rhs);
    // One step of iterative refinement; smooth kernels (Gaussian especially)
    // produce interpolation matrices with huge condition numbers.
    map.weights_ += lu.solve(rhs - A * map.weights_);
    return map;
}

Eigen::VectorXd RbfMap::evaluate(const Eigen::VectorXd& param) const {
    if (param.size() != centers_.cols())
        throw std::invalid_argument("RbfMap: parameter dimension mismatch");
    const long n = centers_.rows();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(weights_.cols());
    for (long i = 0; i < n; ++i)
        out += kernel_value((centers_.row(i).transpose() - param).norm()) *
               weights_.row(i).transpose();
    if (poly_tail_) {
        out += weights_.row(n).transpose();
        for (long k = 0; k < param.size(); ++k)
            out += param[k] * weights_.row(n + 1 + k).transpose();
    }
    return out;
}

Eigen::MatrixXd RbfMap::evaluate_rows(const Eigen::MatrixXd& params) const {
    Eigen::MatrixXd out(params.rows(), weights_.cols());
    for (long i = 0; i < params.rows(); ++i)
        out.row(i) = evaluate(params.row(i).transpose()).transpose();
    return out;
}

RbfMap RbfMap::from_parts(Eigen::MatrixXd centers, Eigen::MatrixXd weights, RbfKernel kernel,
                          double epsilon, bool poly_tail) {
    RbfMap map;
    map.kernel_ = kernel;
    map.epsilon_ = epsilon;
    map.poly_tail_ = poly_tail;
    map.centers_ = std::move(centers);
    map.weights_ = std::move(weights);
    const long expect = map.centers_.rows() + (map.poly_tail_ ? 1 + map.centers_.cols() : 0);
    if (map.weights_.rows() != expect)
        throw std::invalid_argument("RbfMap: weight block does not match centers");
    return map;
}

} // namespace nnspod
