#pragma once

#include "nnspod/grid.hpp"

#include <Eigen/Core>
#include <optional>
#include <string>
#include <utility>

namespace nnspod {

/// Parameterized family of discrete fields over one grid. Snapshots are
/// stored row-major (one field per row); column-convention consumers (POD)
/// take the transpose view via fields_columns().
class SnapshotSet {
public:
    SnapshotSet(Grid grid, Eigen::MatrixXd params, Eigen::MatrixXd fields,
                std::string field_name = "field");

    const Grid& grid() const { return grid_; }
    long count() const { return fields_.rows(); }
    long field_size() const { return fields_.cols(); }
    int param_dim() const { return static_cast<int>(params_.cols()); }

    /// count() x p parameter matrix (one parameter vector per row).
    const Eigen::MatrixXd& params() const { return params_; }
    /// count() x n field matrix (one snapshot per row).
    const Eigen::MatrixXd& fields() const { return fields_; }
    /// n x count() snapshot-column view.
    Eigen::MatrixXd fields_columns() const { return fields_.transpose(); }

    Eigen::VectorXd field_row(long i) const { return fields_.row(i).transpose(); }
    Eigen::VectorXd param_row(long i) const { return params_.row(i).transpose(); }
    double scalar_param(long i) const;

    const std::string& field_name() const { return field_name_; }

    SnapshotSet subset(const std::vector<long>& indices) const;

private:
    Grid grid_;
    Eigen::MatrixXd params_;
    Eigen::MatrixXd fields_;
    std::string field_name_;
};

/// Componentwise min-max scaling fit over the snapshot index; constant
/// components are flagged degenerate and map to 0.
class MinMaxScaler {
public:
    MinMaxScaler() = default;

    /// Per-component extrema over the rows of `data` (component j = column j).
    static MinMaxScaler fit(const Eigen::MatrixXd& data);
    static MinMaxScaler fit(const SnapshotSet& data) { return fit(data.fields()); }

    Eigen::VectorXd scale(const Eigen::VectorXd& x) const;
    Eigen::VectorXd unscale(const Eigen::VectorXd& y) const;
    Eigen::MatrixXd scale_rows(const Eigen::MatrixXd& rows) const;
    Eigen::MatrixXd unscale_rows(const Eigen::MatrixXd& rows) const;

    long size() const { return mins_.size(); }
    const Eigen::VectorXd& mins() const { return mins_; }
    const Eigen::VectorXd& maxs() const { return maxs_; }
    bool degenerate(long i) const { return degenerate_[static_cast<size_t>(i)] != 0; }

private:
    void check_length(long n) const;

    Eigen::VectorXd mins_;
    Eigen::VectorXd maxs_;
    Eigen::VectorXd inv_span_;          // 0 on degenerate components
    std::vector<unsigned char> degenerate_;
};

enum class SplitStrategy { Alternating, Random };

struct SplitSpec {
    SplitStrategy strategy = SplitStrategy::Alternating;
    double fraction = 0.5;              // train fraction, in (0,1)
    unsigned long long seed = 0;        // used by Random only
};

/// Deterministic disjoint train/test partition; union preserves the input.
std::pair<SnapshotSet, SnapshotSet> split_train_test(const SnapshotSet& set, const SplitSpec& spec);

/// Index form of split_train_test (train, test).
std::pair<std::vector<long>, std::vector<long>> split_indices(long count, const SplitSpec& spec);

} // namespace nnspod
