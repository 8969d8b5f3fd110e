#include "nnspod/pod.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace nnspod {

double energy_fraction(const Eigen::VectorXd& sv, int r) {
    const double total = sv.array().square().sum();
    if (total <= 0.0) return 1.0;
    return sv.head(std::min<long>(r, sv.size())).array().square().sum() / total;
}

namespace {

int select_rank(const Eigen::VectorXd& sv, const PodOptions& opts) {
    if (opts.rank > 0) return static_cast<int>(std::min<long>(opts.rank, sv.size()));
    if (!(opts.energy > 0.0 && opts.energy <= 1.0))
        throw std::invalid_argument("pod: energy must lie in (0,1]");
    const double total = sv.array().square().sum();
    if (total <= 0.0) return 1;
    double acc = 0.0;
    for (long r = 0; r < sv.size(); ++r) {
        acc += sv[r] * sv[r];
        if (acc / total >= opts.energy) return static_cast<int>(r + 1);
    }
    return static_cast<int>(sv.size());
}

PodBasis pod_direct(const Eigen::MatrixXd& X, const PodOptions& opts) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU);
    PodBasis basis;
    basis.singular_values = svd.singularValues();
    basis.rank = select_rank(basis.singular_values, opts);
    basis.modes = svd.matrixU().leftCols(basis.rank);
    basis.energy = energy_fraction(basis.singular_values, basis.rank);
    return basis;
}

PodBasis pod_gram(const Eigen::MatrixXd& X, const PodOptions& opts) {
    const long n = X.cols();
    Eigen::MatrixXd G = X.transpose() * X;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("pod: Gram eigendecomposition failed");

    // Eigenvalues come out ascending; flip to the descending SVD order.
    Eigen::VectorXd sv(n);
    Eigen::MatrixXd V(n, n);
    for (long k = 0; k < n; ++k) {
        sv[k] = std::sqrt(std::max(0.0, eig.eigenvalues()[n - 1 - k]));
        V.col(k) = eig.eigenvectors().col(n - 1 - k);
    }

    PodBasis basis;
    basis.singular_values = sv;
    basis.rank = select_rank(sv, opts);
    // Keep only directions with non-vanishing energy; U_k = X v_k / sigma_k.
    const double floor = sv[0] > 0.0 ? sv[0] * 1e-14 : 0.0;
    int usable = basis.rank;
    while (usable > 1 && sv[usable - 1] <= floor) --usable;
    basis.rank = usable;
    Eigen::MatrixXd U(X.rows(), usable);
    for (int k = 0; k < usable; ++k) U.col(k) = X * V.col(k) / sv[k];
    // The quotient loses orthogonality for trailing modes of ill-conditioned
    // spectra; polish with a thin QR (span and ordering preserved).
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(U);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(X.rows(), usable);
    Eigen::MatrixXd R = qr.matrixQR().topRows(usable).triangularView<Eigen::Upper>();
    for (int k = 0; k < usable; ++k)
        if (R(k, k) < 0.0) Q.col(k) = -Q.col(k);
    basis.modes = Q;
    basis.energy = energy_fraction(sv, basis.rank);
    return basis;
}

} // namespace

PodBasis pod(const Eigen::MatrixXd& X, const PodOptions& opts) {
    if (X.rows() == 0 || X.cols() == 0) throw std::invalid_argument("pod: empty matrix");
    if (!X.allFinite()) throw std::invalid_argument("pod: non-finite entries");
    switch (opts.method) {
        case PodOptions::Method::Direct: return pod_direct(X, opts);
        case PodOptions::Method::Gram: return pod_gram(X, opts);
        case PodOptions::Method::Auto:
            return (X.rows() >= 4 * X.cols() && X.cols() > 1) ? pod_gram(X, opts)
                                                              : pod_direct(X, opts);
    }
    return pod_direct(X, opts);
}

Eigen::MatrixXd project(const PodBasis& basis, const Eigen::MatrixXd& X) {
    if (X.rows() != basis.modes.rows())
        throw std::invalid_argument("project: row dimension mismatch");
    return basis.modes.transpose() * X;
}

} // namespace nnspod
