#include <doctest.h>

#include "nnspod/pod.hpp"
#include "nnspod/rom.hpp"
#include "nnspod/shift.hpp"
#include "nnspod/testcases.hpp"

#include <cmath>

using namespace nnspod;

namespace {

GaussianWaveSpec small_wave() {
    GaussianWaveSpec spec;
    spec.n_nodes = 128;
    spec.sigma = 0.4;
    spec.t_first = 2.5;
    spec.t_step = 0.9;
    spec.n_params = 7;
    return spec;
}

ShiftTrainOptions small_options() {
    ShiftTrainOptions opts;
    opts.interp = {0.03, 1e-5, 15000, 21};
    opts.shift = {0.0023, 1e-4, 400, 22};
    opts.interp_layers = {10, 10};
    opts.shift_layers = {10, 4};
    return opts;
}

const SnapshotSet& wave_set() {
    static SnapshotSet set = gen_gaussian(small_wave());
    return set;
}

/// Trained model on the small travelling-wave set, shared across cases.
const ShiftModel& wave_model() {
    static ShiftModel model = [] {
        ShiftModel m = train_interpnet(wave_set(), 2, small_options(), {true, false});
        train_shiftnet(m, wave_set(), small_options());
        return m;
    }();
    return model;
}

double spectrum_ratio(const Eigen::MatrixXd& snapshot_rows) {
    const Eigen::VectorXd sv = pod(snapshot_rows.transpose(), {}).singular_values;
    return sv[1] / sv[0];
}

} // namespace

TEST_CASE("interpnet reconstructs the reference snapshot") {
    const ShiftModel& model = wave_model();
    const SnapshotSet& set = wave_set();
    const Eigen::VectorXd target = model.scale_field(set.field_row(model.ref_index));
    const Eigen::VectorXd recon =
        model.interp_net.forward(model.scale_coords(set.grid().coords())).col(0);
    CHECK((recon - target).cwiseAbs().maxCoeff() < 1e-2);
    const double cosine = recon.dot(target) / (recon.norm() * target.norm());
    CHECK(cosine >= 0.999);
}

TEST_CASE("interpnet on a constant reference learns a bias quickly") {
    Grid g = Grid::uniform_line(0, 1, 32);
    Eigen::MatrixXd params(3, 1);
    params << 0.0, 0.5, 1.0;
    Eigen::MatrixXd fields(3, 32);
    fields.row(0).setConstant(2.5);
    fields.row(1).setConstant(3.5);
    fields.row(2).setConstant(4.5);
    const SnapshotSet set(g, params, fields);
    ShiftTrainOptions opts = small_options();
    opts.interp.max_epochs = 4000;
    const ShiftModel model = train_interpnet(set, 0, opts, {true, false});
    CHECK(model.interp_report.threshold_met);
}

TEST_CASE("learned shift approximates the analytic translation") {
    const ShiftModel& model = wave_model();
    const SnapshotSet& set = wave_set();
    const double t_ref = set.scalar_param(model.ref_index);
    double dev = 0.0;
    for (long i = 0; i < set.count(); ++i) {
        const Eigen::MatrixXd sp = model.shift_field(set.grid(), set.param_row(i));
        dev += (sp.col(0).array() - (set.scalar_param(i) - t_ref)).abs().mean();
    }
    dev /= static_cast<double>(set.count());
    CHECK(dev < 0.1);
}

TEST_CASE("training on only the reference snapshot keeps the shift near zero") {
    const SnapshotSet& set = wave_set();
    const SnapshotSet only_ref = set.subset({2});
    ShiftTrainOptions opts = small_options();
    ShiftModel m = train_interpnet(only_ref, 0, opts, {true, false});
    train_shiftnet(m, only_ref, opts);
    const Eigen::MatrixXd sp = m.shift_field(set.grid(), only_ref.param_row(0));
    CHECK(sp.col(0).cwiseAbs().mean() < 0.05);
    CHECK(shift_loss(m, only_ref) <= 2e-4);   // at the InterpNet residual level
}

TEST_CASE("zero shift makes the composite loss equal the direct residual") {
    ShiftModel model = wave_model();
    model.shift_net.layers().back().weights.setZero();
    model.shift_net.layers().back().biases.setZero();
    const SnapshotSet& set = wave_set();

    const double composite = shift_loss(model, set);
    const Eigen::MatrixXd coords = model.scale_coords(set.grid().coords());
    const Eigen::VectorXd recon = model.interp_net.forward(coords).col(0);
    double direct = 0.0;
    for (long i = 0; i < set.count(); ++i)
        direct += (recon - model.scale_field(set.field_row(i))).squaredNorm() /
                  static_cast<double>(set.field_size());
    direct /= static_cast<double>(set.count());
    CHECK(composite == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("composite loss gradient matches central differences on a tiny case") {
    GaussianWaveSpec spec;
    spec.n_nodes = 16;
    spec.sigma = 1.0;
    spec.t_first = 3.0;
    spec.t_step = 1.5;
    spec.n_params = 3;
    const SnapshotSet tiny = gen_gaussian(spec);
    ShiftTrainOptions opts = small_options();
    opts.interp.max_epochs = 3000;
    ShiftModel model = train_interpnet(tiny, 1, opts, {true, false});
    model.shift_net = Mlp::create({2, 6, 3, 1}, Activation::LeakyRelu, Activation::Identity, 77);

    MlpGradients grads;
    shift_loss_gradient(model, tiny, grads);
    const double step = 1e-6;
    double worst = 0.0;
    for (size_t l = 0; l < model.shift_net.layers().size(); ++l) {
        auto& layer = model.shift_net.layers()[l];
        for (long r = 0; r < layer.weights.rows(); ++r)
            for (long c = 0; c < layer.weights.cols(); ++c) {
                const double keep = layer.weights(r, c);
                layer.weights(r, c) = keep + step;
                const double lp = shift_loss(model, tiny);
                layer.weights(r, c) = keep - step;
                const double lm = shift_loss(model, tiny);
                layer.weights(r, c) = keep;
                const double numeric = (lp - lm) / (2.0 * step);
                const double denom =
                    std::max({std::abs(grads.weights[l](r, c)), std::abs(numeric), 1e-10});
                worst = std::max(worst, std::abs(grads.weights[l](r, c) - numeric) / denom);
            }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("transform collapses the manifold toward the reference") {
    const ShiftModel& model = wave_model();
    const SnapshotSet& set = wave_set();
    const TransformedSet transformed = apply_shift_to_reference(model, set);

    const Eigen::VectorXd ref = set.field_row(model.ref_index);
    CHECK(rel_l2(ref, transformed.snapshots.field_row(model.ref_index)) < 5e-2);
    for (long i = 0; i < set.count(); ++i)
        CHECK(rel_l2(ref, transformed.snapshots.field_row(i)) < 0.1);
}

TEST_CASE("inverse shift undoes the offline transform") {
    const ShiftModel& model = wave_model();
    const SnapshotSet& set = wave_set();
    const TransformedSet transformed = apply_shift_to_reference(model, set);
    for (long i = 0; i < set.count(); ++i) {
        const Eigen::VectorXd back = inverse_shift(
            model, set.grid(), transformed.snapshots.field_row(i), set.param_row(i));
        CHECK(rel_l2(set.field_row(i), back) < 0.05);
    }
}

TEST_CASE("inverse shift at the reference parameter is near identity") {
    const ShiftModel& model = wave_model();
    const SnapshotSet& set = wave_set();
    const Eigen::VectorXd ref = set.field_row(model.ref_index);
    const Eigen::VectorXd out = inverse_shift(model, set.grid(), ref, model.ref_param);
    CHECK(rel_l2(ref, out) < 5e-2);
}

TEST_CASE("prediction at an unseen mean lands the peak at the right node") {
    const ShiftModel& model = wave_model();
    const SnapshotSet& set = wave_set();
    const double t_ref = set.scalar_param(model.ref_index);
    const double t_new = t_ref + 1.35;   // between training means
    Eigen::VectorXd param(1);
    param << t_new;
    const Eigen::VectorXd moved =
        inverse_shift(model, set.grid(), set.field_row(model.ref_index), param);
    long argmax = 0;
    for (long j = 1; j < moved.size(); ++j)
        if (moved[j] > moved[argmax]) argmax = j;
    const double dx = set.grid().axis_nodes(0)[1] - set.grid().axis_nodes(0)[0];
    CHECK(std::abs(set.grid().coords()(argmax, 0) - t_new) <= 2.0 * dx);
}

TEST_CASE("fixed-shift baseline with the true velocity collapses the wave manifold") {
    const SnapshotSet& set = wave_set();
    Eigen::VectorXd b(1);
    b << 1.0;
    const TransformedSet transformed = fixed_shift_baseline(set, b, 2);
    CHECK(spectrum_ratio(transformed.snapshots.fields()) < 1e-2);
}

TEST_CASE("fixed-shift baseline with zero velocity is the identity") {
    const SnapshotSet& set = wave_set();
    Eigen::VectorXd b(1);
    b << 0.0;
    const TransformedSet transformed = fixed_shift_baseline(set, b, 0);
    CHECK(transformed.snapshots.fields() == set.fields());
}

TEST_CASE("fixed-shift baseline on the vortex beats the raw spectrum tenfold") {
    VortexSpec spec;
    spec.nx = 60;
    spec.ny = 30;
    spec.n_snapshots = 40;
    const SnapshotSet set = gen_vortex_density(spec);
    Eigen::VectorXd b(2);
    b << 0.1, 0.0;
    const TransformedSet transformed = fixed_shift_baseline(set, b, 0);
    const double raw = spectrum_ratio(set.fields());
    const double moved = spectrum_ratio(transformed.snapshots.fields());
    CHECK(moved <= 0.1 * raw);
}

TEST_CASE("interpolation-variant transform is near rank one on the step case") {
    StepInterfaceSpec spec;
    spec.n_params = 24;
    const SnapshotSet set = gen_step_interface(spec);
    ShiftTrainOptions opts;
    opts.interp = {0.01, 1e-6, 20000, 31};
    opts.shift = {0.03, 5e-4, 300, 32};
    opts.interp_layers = {30, 30};
    opts.interp_activation = Activation::LeakyRelu;
    ShiftModel model = train_interpnet(set, set.count() - 1, opts, {true, false});
    train_shiftnet(model, set, opts);

    const TransformedSet transformed = transform_to_reference_by_interpolation(model, set);
    CHECK(spectrum_ratio(transformed.snapshots.fields()) < 0.05);
    CHECK(rel_l2(set.field_row(model.ref_index),
                 transformed.snapshots.field_row(model.ref_index)) < 5e-2);

    // online round trip: the interface lands within two cells
    const auto& ys = set.grid().axis_nodes(0);
    const double dy = ys[1] - ys[0];
    for (long i : {0L, set.count() / 2, set.count() - 1}) {
        const Eigen::VectorXd back = inverse_shift(
            model, set.grid(), transformed.snapshots.field_row(i), set.param_row(i));
        long steepest = 0;
        double best = 0.0;
        for (long j = 1; j < back.size(); ++j)
            if (std::abs(back[j] - back[j - 1]) > best) {
                best = std::abs(back[j] - back[j - 1]);
                steepest = j;
            }
        const double h = spec.h_first + (spec.h_last - spec.h_first) * set.scalar_param(i);
        CHECK(std::abs(0.5 * (ys[steepest] + ys[steepest - 1]) - h) <= 2.0 * dy);
    }
}

TEST_CASE("masked axes receive identically zero shift") {
    VortexSpec spec;
    spec.nx = 24;
    spec.ny = 12;
    spec.n_snapshots = 6;
    const SnapshotSet set = gen_vortex_density(spec);
    ShiftTrainOptions opts = small_options();
    opts.interp = {0.01, 1e-4, 2000, 41};
    opts.shift = {0.03, 1e-3, 50, 42};
    opts.interp_layers = {8, 8};
    ShiftModel model = train_interpnet(set, 0, opts, {true, false});
    train_shiftnet(model, set, opts);
    const Eigen::MatrixXd sp = model.shift_field(set.grid(), set.param_row(3));
    CHECK((sp.col(1).array() == 0.0).all());
    CHECK(model.shift_net.output_dim() == 1);
}

TEST_CASE("training subsample is deterministic and importance-weighted") {
    const SnapshotSet& set = wave_set();
    const auto a = training_subsample(set, 48, 5);
    const auto b = training_subsample(set, 48, 5);
    CHECK(a == b);
    CHECK(a.size() == 48);
    const auto all = training_subsample(set, 0, 5);
    CHECK(all.size() == static_cast<size_t>(set.field_size()));
}

TEST_CASE("invalid training setups are rejected") {
    const SnapshotSet& set = wave_set();
    ShiftTrainOptions opts = small_options();
    CHECK_THROWS_AS(train_interpnet(set, 99, opts, {true, false}), std::invalid_argument);
    CHECK_THROWS_AS(train_interpnet(set, 0, opts, {true, true}), std::invalid_argument);
    CHECK_THROWS_AS(train_interpnet(set, 0, opts, {false, false}), std::invalid_argument);
    ShiftModel untrained;
    CHECK_THROWS_AS(train_shiftnet(untrained, set, opts), std::logic_error);
}
