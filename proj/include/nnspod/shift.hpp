#pragma once

#include "nnspod/mlp.hpp"
#include "nnspod/regrid.hpp"
#include "nnspod/snapshot.hpp"

#include <array>
#include <optional>

namespace nnspod {

/// Failure of an iterative numerical phase (divergence, singular system).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Trained field reconstructor + shift detector pair with the scaling
/// metadata needed to move between physical and network units.
struct ShiftModel {
    Mlp interp_net;                     // scaled coords -> scaled field value
    Mlp shift_net;                      // (scaled coords, scaled param) -> shift per active axis
    std::array<bool, 2> shift_axes{true, false};
    long ref_index = 0;                 // index into the training set
    Eigen::VectorXd ref_param;

    Eigen::VectorXd coord_min, coord_span;   // per spatial axis
    Eigen::VectorXd param_min, param_span;   // per parameter component
    double field_min = 0.0;                  // scalar min-max over training fields
    double field_span = 1.0;

    TrainReport interp_report, shift_report;

    int active_axis_count() const;
    Eigen::MatrixXd scale_coords(const Eigen::MatrixXd& coords) const;
    Eigen::VectorXd scale_param(const Eigen::VectorXd& param) const;
    Eigen::VectorXd scale_field(const Eigen::VectorXd& field) const;
    Eigen::VectorXd unscale_field(const Eigen::VectorXd& scaled) const;

    /// ShiftNet input rows for one parameter over the given scaled coords.
    Eigen::MatrixXd shift_inputs(const Eigen::MatrixXd& coords_scaled,
                                 const Eigen::VectorXd& param) const;

    /// Physical displacement at every grid node (columns = axes; zero on
    /// masked axes).
    Eigen::MatrixXd shift_field(const Grid& grid, const Eigen::VectorXd& param) const;
};

struct TransformedSet {
    SnapshotSet snapshots;                      // reference-frame fields on the physical grid
    std::vector<Eigen::MatrixXd> shift_fields;  // per snapshot, n x dim, physical units
    RegridWarnings warnings;
};

struct ShiftTrainOptions {
    TrainConfig interp;                 // InterpNet stage
    TrainConfig shift;                  // composite refinement stage
    long subsample_cap = 4096;          // training points per snapshot
    long scan_cap = 1024;               // points scored by the alignment scan
    long pretrain_epochs = 4000;        // warm-start regression budget
    double pretrain_lr = 0.01;
    std::vector<int> interp_layers{10, 10};
    std::vector<int> shift_layers{10, 4};
    Activation interp_activation = Activation::Softplus;
    Activation shift_activation = Activation::LeakyRelu;
};

/// Importance-weighted node subsample: every node whose value span over the
/// training snapshots reaches 10% of the largest span, plus a seeded uniform
/// fill up to `cap`. Sorted, deterministic.
std::vector<long> training_subsample(const SnapshotSet& train, long cap, unsigned long long seed);

/// Fits InterpNet to the reference snapshot (scaled coords -> scaled value)
/// and initializes the model's scaling metadata. `ref_index` addresses the
/// training set.
ShiftModel train_interpnet(const SnapshotSet& train, long ref_index,
                           const ShiftTrainOptions& opts,
                           const std::array<bool, 2>& shift_axes);

/// Trains ShiftNet against the frozen InterpNet: a per-snapshot constant-shift
/// alignment scan seeds a supervised warm start, then the composite loss
/// (reconstruction through InterpNet at shifted coordinates) is minimized
/// until it reaches the configured threshold or the epoch cap.
void train_shiftnet(ShiftModel& model, const SnapshotSet& train, const ShiftTrainOptions& opts);

/// Composite reconstruction loss of the current ShiftNet over `set`
/// (mean over snapshots of the per-node MSE), evaluated on the full grid.
double shift_loss(const ShiftModel& model, const SnapshotSet& set);

/// Same loss plus its analytic gradient w.r.t. every ShiftNet parameter
/// (through InterpNet's input path); the finite-difference oracles check
/// against this.
double shift_loss_gradient(const ShiftModel& model, const SnapshotSet& set,
                           MlpGradients& gradients);

/// Offline transform: every snapshot's values are transported to the
/// reference frame along the learned shift and regridded.
TransformedSet apply_shift_to_reference(const ShiftModel& model, const SnapshotSet& set);

/// Online inverse: a reference-frame field is transported to the physical
/// frame of `param`.
Eigen::VectorXd inverse_shift(const ShiftModel& model, const Grid& grid,
                              const Eigen::VectorXd& field_at_reference,
                              const Eigen::VectorXd& param,
                              RegridWarnings* warnings = nullptr);

/// Variant transform: the reference snapshot itself is sampled at each
/// snapshot's shifted coordinates and regridded, so the transformed manifold
/// collapses onto the reference while the shifts retain the dynamics.
TransformedSet transform_to_reference_by_interpolation(const ShiftModel& model,
                                                       const SnapshotSet& set);

/// Known-velocity baseline: constant per-snapshot shift b * (t_i - t_ref).
TransformedSet fixed_shift_baseline(const SnapshotSet& set, const Eigen::VectorXd& velocity,
                                    long ref_index);

} // namespace nnspod
