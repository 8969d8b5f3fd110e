#include "nnspod/snapshot.hpp"
#include "nnspod/rng.hpp"

#include <algorithm>
#include <cmath>

namespace nnspod {

SnapshotSet::SnapshotSet(Grid grid, Eigen::MatrixXd params, Eigen::MatrixXd fields,
                         std::string field_name)
    : grid_(std::move(grid)), params_(std::move(params)), fields_(std::move(fields)),
      field_name_(std::move(field_name)) {
    if (params_.rows() != fields_.rows())
        throw std::invalid_argument("SnapshotSet: params/fields row mismatch");
    if (fields_.cols() != grid_.size())
        throw std::invalid_argument("SnapshotSet: field length does not match grid");
    if (params_.rows() == 0)
        throw std::invalid_argument("SnapshotSet: empty set");
    if (!fields_.allFinite() || !params_.allFinite())
        throw std::invalid_argument("SnapshotSet: non-finite entries");
    for (long i = 0; i < params_.rows(); ++i)
        for (long j = i + 1; j < params_.rows(); ++j)
            if (params_.row(i) == params_.row(j))
                throw std::invalid_argument("SnapshotSet: duplicate parameter vectors");
}

double SnapshotSet::scalar_param(long i) const {
    if (params_.cols() != 1)
        throw std::logic_error("SnapshotSet: scalar_param on multi-dimensional parameters");
    return params_(i, 0);
}

SnapshotSet SnapshotSet::subset(const std::vector<long>& indices) const {
    Eigen::MatrixXd p(static_cast<long>(indices.size()), params_.cols());
    Eigen::MatrixXd f(static_cast<long>(indices.size()), fields_.cols());
    for (size_t k = 0; k < indices.size(); ++k) {
        p.row(static_cast<long>(k)) = params_.row(indices[k]);
        f.row(static_cast<long>(k)) = fields_.row(indices[k]);
    }
    return SnapshotSet(grid_, std::move(p), std::move(f), field_name_);
}

MinMaxScaler MinMaxScaler::fit(const Eigen::MatrixXd& data) {
    if (data.rows() == 0 || data.cols() == 0)
        throw std::invalid_argument("MinMaxScaler: empty data");
    MinMaxScaler s;
    s.mins_ = data.colwise().minCoeff();
    s.maxs_ = data.colwise().maxCoeff();
    const long n = s.mins_.size();
    s.inv_span_.resize(n);
    s.degenerate_.resize(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
        const double span = s.maxs_[i] - s.mins_[i];
        // Relative tolerance: spans at rounding level would amplify
        // representation noise into O(1) scaled values.
        const double tol = 1e-12 * std::max({std::abs(s.mins_[i]), std::abs(s.maxs_[i]), 1e-300});
        const bool degen = span <= tol;
        s.degenerate_[static_cast<size_t>(i)] = degen ? 1 : 0;
        s.inv_span_[i] = degen ? 0.0 : 1.0 / span;
    }
    return s;
}

void MinMaxScaler::check_length(long n) const {
    if (n != mins_.size())
        throw std::invalid_argument("MinMaxScaler: length mismatch");
}

Eigen::VectorXd MinMaxScaler::scale(const Eigen::VectorXd& x) const {
    check_length(x.size());
    return (x - mins_).cwiseProduct(inv_span_);
}

Eigen::VectorXd MinMaxScaler::unscale(const Eigen::VectorXd& y) const {
    check_length(y.size());
    Eigen::VectorXd x = mins_;
    for (long i = 0; i < y.size(); ++i)
        if (!degenerate_[static_cast<size_t>(i)])
            x[i] += y[i] * (maxs_[i] - mins_[i]);
    return x;
}

Eigen::MatrixXd MinMaxScaler::scale_rows(const Eigen::MatrixXd& rows) const {
    check_length(rows.cols());
    Eigen::MatrixXd out = rows;
    out.rowwise() -= mins_.transpose();
    out = out.array().rowwise() * inv_span_.transpose().array();
    return out;
}

Eigen::MatrixXd MinMaxScaler::unscale_rows(const Eigen::MatrixXd& rows) const {
    check_length(rows.cols());
    Eigen::MatrixXd out(rows.rows(), rows.cols());
    for (long r = 0; r < rows.rows(); ++r)
        out.row(r) = unscale(rows.row(r).transpose()).transpose();
    return out;
}

std::pair<std::vector<long>, std::vector<long>> split_indices(long count, const SplitSpec& spec) {
    if (!(spec.fraction > 0.0 && spec.fraction < 1.0))
        throw std::invalid_argument("split: fraction must lie in (0,1)");
    std::vector<long> train, test;
    if (spec.strategy == SplitStrategy::Alternating) {
        // fraction f: of every run of round(1/f) consecutive snapshots the
        // first goes to train; f=0.5 puts even indices in train.
        const long period = std::max<long>(2, std::lround(1.0 / spec.fraction));
        for (long i = 0; i < count; ++i)
            (i % period == 0 || (period == 2 && i % 2 == 0) ? train : test).push_back(i);
        if (spec.fraction > 0.5) {
            // majority-train variant: every period-th snapshot is test
            train.clear();
            test.clear();
            const long p2 = std::max<long>(2, std::lround(1.0 / (1.0 - spec.fraction)));
            for (long i = 0; i < count; ++i)
                (i % p2 == p2 - 1 ? test : train).push_back(i);
        }
    } else {
        std::vector<long> order(static_cast<size_t>(count));
        for (long i = 0; i < count; ++i) order[static_cast<size_t>(i)] = i;
        Rng rng(spec.seed);
        rng.shuffle(order.begin(), order.end());
        const long n_train = std::max<long>(1, std::min<long>(count - 1,
            static_cast<long>(std::floor(spec.fraction * static_cast<double>(count) + 0.5))));
        train.assign(order.begin(), order.begin() + n_train);
        test.assign(order.begin() + n_train, order.end());
        std::sort(train.begin(), train.end());
        std::sort(test.begin(), test.end());
    }
    if (train.empty() || test.empty())
        throw std::invalid_argument("split: degenerate partition (too few snapshots)");
    return {train, test};
}

std::pair<SnapshotSet, SnapshotSet> split_train_test(const SnapshotSet& set, const SplitSpec& spec) {
    auto [train_idx, test_idx] = split_indices(set.count(), spec);
    return {set.subset(train_idx), set.subset(test_idx)};
}

} // namespace nnspod
