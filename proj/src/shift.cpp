#include "nnspod/shift.hpp"
#include "nnspod/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nnspod {

int ShiftModel::active_axis_count() const {
    int k = 0;
    for (bool a : shift_axes) k += a ? 1 : 0;
    return k;
}

Eigen::MatrixXd ShiftModel::scale_coords(const Eigen::MatrixXd& coords) const {
    Eigen::MatrixXd out = coords;
    for (long a = 0; a < out.cols(); ++a) {
        const double span = coord_span[a] > 0.0 ? coord_span[a] : 1.0;
        out.col(a) = (out.col(a).array() - coord_min[a]) / span;
    }
    return out;
}

Eigen::VectorXd ShiftModel::scale_param(const Eigen::VectorXd& param) const {
    if (param.size() != param_min.size())
        throw std::invalid_argument("ShiftModel: parameter dimension mismatch");
    Eigen::VectorXd out(param.size());
    for (long k = 0; k < param.size(); ++k)
        out[k] = param_span[k] > 0.0 ? (param[k] - param_min[k]) / param_span[k] : 0.0;
    return out;
}

Eigen::VectorXd ShiftModel::scale_field(const Eigen::VectorXd& field) const {
    return (field.array() - field_min) / field_span;
}

Eigen::VectorXd ShiftModel::unscale_field(const Eigen::VectorXd& scaled) const {
    return (scaled.array() * field_span + field_min).matrix();
}

Eigen::MatrixXd ShiftModel::shift_inputs(const Eigen::MatrixXd& coords_scaled,
                                         const Eigen::VectorXd& param) const {
    const Eigen::VectorXd ps = scale_param(param);
    Eigen::MatrixXd in(coords_scaled.rows(), coords_scaled.cols() + ps.size());
    in.leftCols(coords_scaled.cols()) = coords_scaled;
    for (long k = 0; k < ps.size(); ++k)
        in.col(coords_scaled.cols() + k).setConstant(ps[k]);
    return in;
}

Eigen::MatrixXd ShiftModel::shift_field(const Grid& grid, const Eigen::VectorXd& param) const {
    const Eigen::MatrixXd coords_scaled = scale_coords(grid.coords());
    const Eigen::MatrixXd s = shift_net.forward(shift_inputs(coords_scaled, param));
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(grid.size(), grid.dim());
    int col = 0;
    for (int a = 0; a < grid.dim(); ++a) {
        if (!shift_axes[static_cast<size_t>(a)]) continue;
        out.col(a) = s.col(col++) * coord_span[a];
    }
    return out;
}

std::vector<long> training_subsample(const SnapshotSet& train, long cap, unsigned long long seed) {
    const long n = train.field_size();
    if (cap <= 0 || cap >= n) {
        std::vector<long> all(static_cast<size_t>(n));
        std::iota(all.begin(), all.end(), 0L);
        return all;
    }
    const Eigen::VectorXd span =
        train.fields().colwise().maxCoeff() - train.fields().colwise().minCoeff();
    const double thresh = 0.1 * span.maxCoeff();
    std::vector<long> active, rest;
    for (long j = 0; j < n; ++j) (span[j] >= thresh ? active : rest).push_back(j);

    Rng rng(seed);
    std::vector<long> chosen;
    if (static_cast<long>(active.size()) >= cap) {
        rng.shuffle(active.begin(), active.end());
        chosen.assign(active.begin(), active.begin() + cap);
    } else {
        chosen = active;
        rng.shuffle(rest.begin(), rest.end());
        const long need = cap - static_cast<long>(active.size());
        chosen.insert(chosen.end(), rest.begin(), rest.begin() + need);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

namespace {

// InterpNet is only trusted on the scaled coordinate box it was trained on;
// queries that drift outside (large trial shifts, domain edges) saturate
// smoothly at the box instead of riding the network's extrapolation tails.
// `dfactor`, when given, receives the derivative of the squash per entry.
constexpr double kEdgeWidth = 0.05;

void soft_box_clamp(Eigen::MatrixXd& q, Eigen::MatrixXd* dfactor) {
    if (dfactor) dfactor->setOnes(q.rows(), q.cols());
    for (long c = 0; c < q.cols(); ++c)
        for (long r = 0; r < q.rows(); ++r) {
            double& v = q(r, c);
            double t = 0.0;
            if (v > 1.0) t = (v - 1.0) / kEdgeWidth;
            else if (v < 0.0) t = (v - 0.0) / kEdgeWidth;
            else continue;
            const double th = std::tanh(t);
            v = (t > 0.0 ? 1.0 : 0.0) + kEdgeWidth * th;
            if (dfactor) (*dfactor)(r, c) = 1.0 - th * th;
        }
}

Eigen::MatrixXd rows_at(const Eigen::MatrixXd& m, const std::vector<long>& idx) {
    Eigen::MatrixXd out(static_cast<long>(idx.size()), m.cols());
    for (size_t k = 0; k < idx.size(); ++k) out.row(static_cast<long>(k)) = m.row(idx[k]);
    return out;
}

Eigen::VectorXd entries_at(const Eigen::VectorXd& v, const std::vector<long>& idx) {
    Eigen::VectorXd out(static_cast<long>(idx.size()));
    for (size_t k = 0; k < idx.size(); ++k) out[static_cast<long>(k)] = v[idx[k]];
    return out;
}

void check_finite_loss(double loss, const char* stage) {
    if (!std::isfinite(loss))
        throw NumericalError(std::string(stage) + ": training diverged (non-finite loss)");
}

/// Full-batch Adam on MSE to fixed targets.
TrainReport train_regression(Mlp& net, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                             double lr, double threshold, long max_epochs, const char* stage) {
    AdamState adam = AdamState::for_network(net, lr);
    const double inv_n = 1.0 / static_cast<double>(inputs.rows());
    TrainReport report;
    for (long epoch = 0; epoch < max_epochs; ++epoch) {
        Mlp::Trace trace;
        const Eigen::MatrixXd out = net.forward(inputs, trace);
        const Eigen::VectorXd r = out.col(0) - targets;
        const double loss = r.squaredNorm() * inv_n;
        check_finite_loss(loss, stage);
        if (loss <= threshold) {
            report = {loss, epoch, true};
            return report;
        }
        const Eigen::MatrixXd upstream = (2.0 * inv_n) * r;
        adam.step(net, net.backward(trace, upstream));
    }
    const Eigen::MatrixXd out = net.forward(inputs);
    const double loss = (out.col(0) - targets).squaredNorm() * inv_n;
    check_finite_loss(loss, stage);
    report = {loss, max_epochs, loss <= threshold};
    return report;
}

std::vector<int> with_io(const std::vector<int>& hidden, int in, int out) {
    std::vector<int> dims;
    dims.push_back(in);
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(out);
    return dims;
}

std::vector<int> active_axes_list(const std::array<bool, 2>& axes, int dim) {
    std::vector<int> out;
    for (int a = 0; a < dim; ++a)
        if (axes[static_cast<size_t>(a)]) out.push_back(a);
    return out;
}

} // namespace

ShiftModel train_interpnet(const SnapshotSet& train, long ref_index, const ShiftTrainOptions& opts,
                           const std::array<bool, 2>& shift_axes) {
    if (ref_index < 0 || ref_index >= train.count())
        throw std::invalid_argument("train_interpnet: reference index outside the training set");
    const Grid& grid = train.grid();
    for (int a = grid.dim(); a < 2; ++a)
        if (shift_axes[static_cast<size_t>(a)])
            throw std::invalid_argument("train_interpnet: shift axis exceeds grid dimension");

    ShiftModel model;
    model.shift_axes = shift_axes;
    if (model.active_axis_count() == 0)
        throw std::invalid_argument("train_interpnet: no active shift axis");
    model.ref_index = ref_index;
    model.ref_param = train.param_row(ref_index);

    model.coord_min.resize(grid.dim());
    model.coord_span.resize(grid.dim());
    for (int a = 0; a < grid.dim(); ++a) {
        model.coord_min[a] = grid.bound_min(a);
        model.coord_span[a] = grid.extent(a);
    }
    model.param_min = train.params().colwise().minCoeff().transpose();
    model.param_span =
        (train.params().colwise().maxCoeff() - train.params().colwise().minCoeff()).transpose();
    model.field_min = train.fields().minCoeff();
    const double span = train.fields().maxCoeff() - model.field_min;
    model.field_span = span > 0.0 ? span : 1.0;

    model.interp_net = Mlp::create(with_io(opts.interp_layers, grid.dim(), 1),
                                   opts.interp_activation, Activation::Identity,
                                   opts.interp.seed);

    const auto sub = training_subsample(train, opts.subsample_cap, opts.interp.seed + 101);
    const Eigen::MatrixXd coords_scaled = model.scale_coords(grid.coords());
    const Eigen::MatrixXd inputs = rows_at(coords_scaled, sub);
    const Eigen::VectorXd targets = entries_at(model.scale_field(train.field_row(ref_index)), sub);

    model.interp_report = train_regression(model.interp_net, inputs, targets, opts.interp.lr,
                                           opts.interp.loss_threshold, opts.interp.max_epochs,
                                           "InterpNet");
    return model;
}

namespace {

/// Best constant shift per active axis for one snapshot, by coordinate
/// descent over grid-resolution candidates with parabolic refinement.
Eigen::VectorXd scan_constant_shift(const ShiftModel& model, const Grid& grid,
                                    const Eigen::MatrixXd& coords_scaled_sub,
                                    const Eigen::VectorXd& target_sub) {
    const auto axes = active_axes_list(model.shift_axes, grid.dim());
    Eigen::VectorXd best = Eigen::VectorXd::Zero(static_cast<long>(axes.size()));
    const int rounds = axes.size() > 1 ? 2 : 1;
    for (int round = 0; round < rounds; ++round) {
        for (size_t k = 0; k < axes.size(); ++k) {
            const int axis = axes[k];
            const long n_cand = 2L * grid.axis_size(axis) + 1;
            const double step = 2.0 / static_cast<double>(n_cand - 1);
            double best_err = std::numeric_limits<double>::infinity();
            long best_i = 0;
            Eigen::VectorXd errs(n_cand);
            Eigen::MatrixXd q = coords_scaled_sub;
            for (size_t j = 0; j < axes.size(); ++j)
                if (j != k) q.col(axes[j]).array() -= best[static_cast<long>(j)];
            for (long i = 0; i < n_cand; ++i) {
                const double delta = -1.0 + step * static_cast<double>(i);
                Eigen::MatrixXd qi = q;
                qi.col(axis).array() -= delta;
                soft_box_clamp(qi, nullptr);
                const Eigen::VectorXd v = model.interp_net.forward(qi).col(0);
                errs[i] = (v - target_sub).squaredNorm();
                if (errs[i] < best_err) {
                    best_err = errs[i];
                    best_i = i;
                }
            }
            double refined = -1.0 + step * static_cast<double>(best_i);
            if (best_i > 0 && best_i + 1 < n_cand) {
                const double a = errs[best_i - 1], b = errs[best_i], c = errs[best_i + 1];
                const double denom = a - 2.0 * b + c;
                if (denom > 0.0) refined += 0.5 * (a - c) / denom * step;
            }
            best[static_cast<long>(k)] = refined;
        }
    }
    return best;
}

} // namespace

void train_shiftnet(ShiftModel& model, const SnapshotSet& train, const ShiftTrainOptions& opts) {
    if (model.interp_net.layers().empty())
        throw std::logic_error("train_shiftnet: InterpNet not trained");
    const Grid& grid = train.grid();
    const auto axes = active_axes_list(model.shift_axes, grid.dim());
    const int n_out = static_cast<int>(axes.size());
    const long n_params = train.param_dim();
    const long ns = train.count();

    model.shift_net = Mlp::create(with_io(opts.shift_layers, grid.dim() + static_cast<int>(n_params), n_out),
                                  opts.shift_activation, Activation::Identity, opts.shift.seed);

    const Eigen::MatrixXd coords_scaled = model.scale_coords(grid.coords());
    const auto scan_sub = training_subsample(train, opts.scan_cap, opts.shift.seed + 211);
    const Eigen::MatrixXd scan_coords = rows_at(coords_scaled, scan_sub);

    // Alignment scan: the optimal constant shift of every training snapshot.
    Eigen::MatrixXd scan_targets(ns, n_out);
    for (long i = 0; i < ns; ++i) {
        const Eigen::VectorXd target = entries_at(model.scale_field(train.field_row(i)), scan_sub);
        scan_targets.row(i) = scan_constant_shift(model, grid, scan_coords, target).transpose();
    }

    // Warm start: regress (coords, param) onto the scanned constants. For
    // scalar parameters the scanned trend is continued linearly a little
    // beyond both ends so predictions just outside the training range stay
    // on trend.
    const auto pre_sub = training_subsample(train, std::min<long>(opts.scan_cap, 256), opts.shift.seed + 307);
    const Eigen::MatrixXd pre_coords = rows_at(coords_scaled, pre_sub);
    std::vector<Eigen::VectorXd> pre_params;
    std::vector<Eigen::VectorXd> pre_values;
    for (long i = 0; i < ns; ++i) {
        pre_params.push_back(train.param_row(i));
        pre_values.push_back(scan_targets.row(i).transpose());
    }
    if (n_params == 1 && ns >= 2) {
        std::vector<long> order(static_cast<size_t>(ns));
        std::iota(order.begin(), order.end(), 0L);
        std::sort(order.begin(), order.end(), [&](long a, long b) {
            return train.params()(a, 0) < train.params()(b, 0);
        });
        const double ext = 0.15 * model.param_span[0];
        if (ext > 0.0) {
            auto anchor = [&](long i0, long i1, double sign) {
                const double t0 = train.params()(i0, 0), t1 = train.params()(i1, 0);
                const Eigen::VectorXd s0 = scan_targets.row(i0).transpose();
                const Eigen::VectorXd s1 = scan_targets.row(i1).transpose();
                const Eigen::VectorXd slope = (s1 - s0) / (t1 - t0);
                Eigen::VectorXd p(1);
                p[0] = (sign < 0.0 ? t0 : t1) + sign * ext;
                pre_params.push_back(p);
                pre_values.push_back((sign < 0.0 ? s0 : s1) + sign * ext * slope);
            };
            anchor(order[1], order[0], -1.0);
            anchor(order[static_cast<size_t>(ns - 2)], order[static_cast<size_t>(ns - 1)], 1.0);
        }
    }
    const long rows_per = pre_coords.rows();
    Eigen::MatrixXd pre_inputs(static_cast<long>(pre_params.size()) * rows_per,
                               grid.dim() + n_params);
    Eigen::MatrixXd pre_targets(pre_inputs.rows(), n_out);
    for (size_t g = 0; g < pre_params.size(); ++g) {
        const long base = static_cast<long>(g) * rows_per;
        pre_inputs.block(base, 0, rows_per, grid.dim()) = pre_coords;
        const Eigen::VectorXd ps = model.scale_param(pre_params[g]);
        for (long k = 0; k < n_params; ++k)
            pre_inputs.block(base, grid.dim() + k, rows_per, 1).setConstant(ps[k]);
        pre_targets.middleRows(base, rows_per).rowwise() = pre_values[g].transpose();
    }
    {
        AdamState adam = AdamState::for_network(model.shift_net, opts.pretrain_lr);
        const double inv_n = 1.0 / static_cast<double>(pre_inputs.rows());
        for (long epoch = 0; epoch < opts.pretrain_epochs; ++epoch) {
            Mlp::Trace trace;
            const Eigen::MatrixXd out = model.shift_net.forward(pre_inputs, trace);
            const Eigen::MatrixXd r = out - pre_targets;
            const double loss = r.squaredNorm() * inv_n;
            check_finite_loss(loss, "ShiftNet warm start");
            if (loss <= 1e-9) break;
            adam.step(model.shift_net, model.shift_net.backward(trace, (2.0 * inv_n) * r));
        }
    }

    // Composite refinement: reconstruction through InterpNet at shifted
    // coordinates, gradients flowing through InterpNet's inputs.
    const auto sub = training_subsample(train, opts.subsample_cap, opts.shift.seed + 401);
    const Eigen::MatrixXd sub_coords = rows_at(coords_scaled, sub);
    const long n_sub = sub_coords.rows();
    Eigen::MatrixXd targets(ns, n_sub);
    for (long i = 0; i < ns; ++i)
        targets.row(i) = entries_at(model.scale_field(train.field_row(i)), sub).transpose();

    std::vector<Eigen::MatrixXd> inputs(static_cast<size_t>(ns));
    for (long i = 0; i < ns; ++i)
        inputs[static_cast<size_t>(i)] = model.shift_inputs(sub_coords, train.param_row(i));

    AdamState adam = AdamState::for_network(model.shift_net, opts.shift.lr);
    const double inv = 1.0 / static_cast<double>(n_sub * ns);
    TrainReport report;
    long epoch = 0;
    for (; epoch < opts.shift.max_epochs; ++epoch) {
        MlpGradients total = model.shift_net.zero_gradients();
        double loss = 0.0;
        for (long i = 0; i < ns; ++i) {
            Mlp::Trace strace;
            const Eigen::MatrixXd s = model.shift_net.forward(inputs[static_cast<size_t>(i)], strace);
            Eigen::MatrixXd q = sub_coords;
            for (size_t k = 0; k < axes.size(); ++k)
                q.col(axes[k]) -= s.col(static_cast<long>(k));
            Eigen::MatrixXd clamp_d;
            soft_box_clamp(q, &clamp_d);
            Mlp::Trace itrace;
            const Eigen::VectorXd v = model.interp_net.forward(q, itrace).col(0);
            const Eigen::VectorXd r = v - targets.row(i).transpose();
            loss += r.squaredNorm();
            const MlpGradients ig = model.interp_net.backward(itrace, (2.0 * inv) * r);
            Eigen::MatrixXd upstream(n_sub, n_out);
            for (size_t k = 0; k < axes.size(); ++k)
                upstream.col(static_cast<long>(k)) =
                    -(ig.input.col(axes[k]).array() * clamp_d.col(axes[k]).array()).matrix();
            const MlpGradients sg = model.shift_net.backward(strace, upstream);
            for (size_t l = 0; l < total.weights.size(); ++l) {
                total.weights[l] += sg.weights[l];
                total.biases[l] += sg.biases[l];
            }
        }
        loss *= inv;
        check_finite_loss(loss, "ShiftNet");
        if (loss <= opts.shift.loss_threshold) {
            report = {loss, epoch, true};
            model.shift_report = report;
            return;
        }
        adam.step(model.shift_net, total);
    }
    const double final_loss = shift_loss(model, train);
    check_finite_loss(final_loss, "ShiftNet");
    model.shift_report = {final_loss, epoch, final_loss <= opts.shift.loss_threshold};
}

double shift_loss(const ShiftModel& model, const SnapshotSet& set) {
    const Grid& grid = set.grid();
    const auto axes = active_axes_list(model.shift_axes, grid.dim());
    const Eigen::MatrixXd coords_scaled = model.scale_coords(grid.coords());
    double loss = 0.0;
    for (long i = 0; i < set.count(); ++i) {
        const Eigen::MatrixXd s =
            model.shift_net.forward(model.shift_inputs(coords_scaled, set.param_row(i)));
        Eigen::MatrixXd q = coords_scaled;
        for (size_t k = 0; k < axes.size(); ++k)
            q.col(axes[k]) -= s.col(static_cast<long>(k));
        soft_box_clamp(q, nullptr);
        const Eigen::VectorXd v = model.interp_net.forward(q).col(0);
        const Eigen::VectorXd r = v - model.scale_field(set.field_row(i));
        loss += r.squaredNorm() / static_cast<double>(grid.size());
    }
    return loss / static_cast<double>(set.count());
}

double shift_loss_gradient(const ShiftModel& model, const SnapshotSet& set,
                           MlpGradients& gradients) {
    const Grid& grid = set.grid();
    const auto axes = active_axes_list(model.shift_axes, grid.dim());
    const Eigen::MatrixXd coords_scaled = model.scale_coords(grid.coords());
    const double inv = 1.0 / static_cast<double>(grid.size() * set.count());
    gradients = model.shift_net.zero_gradients();
    double loss = 0.0;
    for (long i = 0; i < set.count(); ++i) {
        Mlp::Trace strace;
        const Eigen::MatrixXd s = model.shift_net.forward(
            model.shift_inputs(coords_scaled, set.param_row(i)), strace);
        Eigen::MatrixXd q = coords_scaled;
        for (size_t k = 0; k < axes.size(); ++k)
            q.col(axes[k]) -= s.col(static_cast<long>(k));
        Eigen::MatrixXd clamp_d;
        soft_box_clamp(q, &clamp_d);
        Mlp::Trace itrace;
        const Eigen::VectorXd v = model.interp_net.forward(q, itrace).col(0);
        const Eigen::VectorXd r = v - model.scale_field(set.field_row(i));
        loss += r.squaredNorm();
        const MlpGradients ig = model.interp_net.backward(itrace, (2.0 * inv) * r);
        Eigen::MatrixXd upstream(grid.size(), static_cast<long>(axes.size()));
        for (size_t k = 0; k < axes.size(); ++k)
            upstream.col(static_cast<long>(k)) =
                -(ig.input.col(axes[k]).array() * clamp_d.col(axes[k]).array()).matrix();
        const MlpGradients sg = model.shift_net.backward(strace, upstream);
        for (size_t l = 0; l < gradients.weights.size(); ++l) {
            gradients.weights[l] += sg.weights[l];
            gradients.biases[l] += sg.biases[l];
        }
    }
    return loss * inv;
}

TransformedSet apply_shift_to_reference(const ShiftModel& model, const SnapshotSet& set) {
    const Grid& grid = set.grid();
    RegridWarnings warn;
    Eigen::MatrixXd fields(set.count(), grid.size());
    std::vector<Eigen::MatrixXd> shifts;
    shifts.reserve(static_cast<size_t>(set.count()));
    for (long i = 0; i < set.count(); ++i) {
        Eigen::MatrixXd sp = model.shift_field(grid, set.param_row(i));
        fields.row(i) = transport_field(grid, set.field_row(i), sp, -1.0, &warn).transpose();
        shifts.push_back(std::move(sp));
    }
    return {SnapshotSet(grid, set.params(), std::move(fields), set.field_name()),
            std::move(shifts), warn};
}

Eigen::VectorXd inverse_shift(const ShiftModel& model, const Grid& grid,
                              const Eigen::VectorXd& field_at_reference,
                              const Eigen::VectorXd& param, RegridWarnings* warnings) {
    const Eigen::MatrixXd sp = model.shift_field(grid, param);
    return transport_field(grid, field_at_reference, sp, +1.0, warnings);
}

TransformedSet transform_to_reference_by_interpolation(const ShiftModel& model,
                                                       const SnapshotSet& set) {
    const Grid& grid = set.grid();
    const auto axes = active_axes_list(model.shift_axes, grid.dim());
    if (axes.size() != 1 && grid.dim() != 1)
        throw std::invalid_argument(
            "transform_to_reference_by_interpolation: needs a single active axis");
    const int axis = axes[0];
    if (model.ref_index < 0 || model.ref_index >= set.count())
        throw std::invalid_argument("transform_to_reference_by_interpolation: reference index "
                                    "outside this set");
    const Eigen::VectorXd ref = set.field_row(model.ref_index);

    RegridWarnings warn;
    Eigen::MatrixXd fields(set.count(), grid.size());
    std::vector<Eigen::MatrixXd> shifts;
    for (long i = 0; i < set.count(); ++i) {
        Eigen::MatrixXd sp = model.shift_field(grid, set.param_row(i));
        // Sample the reference at the shifted coordinates, then regrid the
        // pairs; for an exact shift the result reproduces the reference.
        Eigen::VectorXd sampled(grid.size());
        if (grid.dim() == 1) {
            const auto& nodes = grid.axis_nodes(0);
            const Eigen::VectorXd shifted = nodes - sp.col(0);
            sampled = interp_line(nodes, ref, shifted);
            fields.row(i) = regrid_line(shifted, sampled, nodes, &warn).transpose();
        } else {
            const int nx = grid.axis_size(0), ny = grid.axis_size(1);
            if (axis == 0) {
                const auto& xs = grid.axis_nodes(0);
                Eigen::VectorXd knots(nx), refline(nx);
                for (int iy = 0; iy < ny; ++iy) {
                    for (int ix = 0; ix < nx; ++ix) {
                        const long id = static_cast<long>(ix) * ny + iy;
                        knots[ix] = xs[ix] - sp(id, 0);
                        refline[ix] = ref[id];
                    }
                    const Eigen::VectorXd vals = interp_line(xs, refline, knots);
                    const Eigen::VectorXd line = regrid_line(knots, vals, xs, &warn);
                    for (int ix = 0; ix < nx; ++ix)
                        fields(i, static_cast<long>(ix) * ny + iy) = line[ix];
                }
            } else {
                const auto& ys = grid.axis_nodes(1);
                Eigen::VectorXd knots(ny);
                for (int ix = 0; ix < nx; ++ix) {
                    const long base = static_cast<long>(ix) * ny;
                    for (int iy = 0; iy < ny; ++iy) knots[iy] = ys[iy] - sp(base + iy, 1);
                    const Eigen::VectorXd refline = ref.segment(base, ny);
                    const Eigen::VectorXd vals = interp_line(ys, refline, knots);
                    fields.row(i).segment(base, ny) = regrid_line(knots, vals, ys, &warn).transpose();
                }
            }
        }
        shifts.push_back(std::move(sp));
    }
    return {SnapshotSet(grid, set.params(), std::move(fields), set.field_name()),
            std::move(shifts), warn};
}

TransformedSet fixed_shift_baseline(const SnapshotSet& set, const Eigen::VectorXd& velocity,
                                    long ref_index) {
    const Grid& grid = set.grid();
    if (velocity.size() != grid.dim())
        throw std::invalid_argument("fixed_shift_baseline: velocity dimension mismatch");
    if (ref_index < 0 || ref_index >= set.count())
        throw std::invalid_argument("fixed_shift_baseline: reference index out of range");
    const double t_ref = set.scalar_param(ref_index);

    RegridWarnings warn;
    Eigen::MatrixXd fields(set.count(), grid.size());
    std::vector<Eigen::MatrixXd> shifts;
    for (long i = 0; i < set.count(); ++i) {
        const double dt = set.scalar_param(i) - t_ref;
        Eigen::MatrixXd sp(grid.size(), grid.dim());
        for (int a = 0; a < grid.dim(); ++a) sp.col(a).setConstant(velocity[a] * dt);
        fields.row(i) = transport_field(grid, set.field_row(i), sp, -1.0, &warn).transpose();
        shifts.push_back(std::move(sp));
    }
    return {SnapshotSet(grid, set.params(), std::move(fields), set.field_name()),
            std::move(shifts), warn};
}

} // namespace nnspod
