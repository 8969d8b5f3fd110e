#pragma once

#include <Eigen/Core>

namespace nnspod {

/// Truncated POD basis of a snapshot matrix (columns = snapshots). The full
/// singular spectrum is retained for decay reporting.
struct PodBasis {
    Eigen::MatrixXd modes;             // m x r, orthonormal columns
    Eigen::VectorXd singular_values;   // full spectrum, non-increasing
    int rank = 0;
    double energy = 0.0;               // fraction captured by the first `rank` modes
};

struct PodOptions {
    /// Explicit rank; 0 selects by energy.
    int rank = 0;
    /// Smallest r with sum(sigma^2, 1..r)/sum(sigma^2) >= energy.
    double energy = 0.9999;
    enum class Method { Auto, Direct, Gram } method = Method::Auto;
};

/// Thin SVD of an m x n snapshot matrix. Method::Gram forms the n x n Gram
/// matrix and eigendecomposes it (the snapshot method); Auto picks Gram when
/// m is much larger than n.
PodBasis pod(const Eigen::MatrixXd& snapshots, const PodOptions& opts = {});

/// Modal coefficients C = U^T X.
Eigen::MatrixXd project(const PodBasis& basis, const Eigen::MatrixXd& snapshots);

/// Energy fraction captured by the leading r values of a singular spectrum.
double energy_fraction(const Eigen::VectorXd& singular_values, int r);

} // namespace nnspod
