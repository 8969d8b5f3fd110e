#pragma once

#include <Eigen/Core>
#include <string>

namespace nnspod {

enum class RbfKernel { ThinPlate, Gaussian, Multiquadric };

RbfKernel rbf_kernel_from_name(const std::string& name);
std::string rbf_kernel_name(RbfKernel k);

/// Exact RBF interpolant from parameter vectors to coefficient vectors.
/// Thin-plate kernels carry a linear polynomial tail for well-posedness;
/// Gaussian/multiquadric use the shape parameter epsilon.
class RbfMap {
public:
    RbfMap() = default;

    /// centers: N x p parameter rows; values: N x r coefficient rows.
    static RbfMap fit(const Eigen::MatrixXd& centers, const Eigen::MatrixXd& values,
                      RbfKernel kernel, double epsilon = 1.0);

    Eigen::VectorXd evaluate(const Eigen::VectorXd& param) const;
    Eigen::MatrixXd evaluate_rows(const Eigen::MatrixXd& params) const;

    RbfKernel kernel() const { return kernel_; }
    double epsilon() const { return epsilon_; }
    const Eigen::MatrixXd& centers() const { return centers_; }
    const Eigen::MatrixXd& weights() const { return weights_; }
    bool has_polynomial_tail() const { return poly_tail_; }

    /// Reconstructs a fitted map from serialized pieces.
    static RbfMap from_parts(Eigen::MatrixXd centers, Eigen::MatrixXd weights,
                             RbfKernel kernel, double epsilon, bool poly_tail);

private:
    double kernel_value(double r) const;

    RbfKernel kernel_ = RbfKernel::ThinPlate;
    double epsilon_ = 1.0;
    bool poly_tail_ = true;
    Eigen::MatrixXd centers_;   // N x p
    Eigen::MatrixXd weights_;   // (N [+ 1 + p]) x r
};

} // namespace nnspod
