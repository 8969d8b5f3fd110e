#include "nnspod/rom.hpp"
#include "nnspod/serialize.hpp"
#include "nnspod/snapshot_io.hpp"

#include <cmath>
#include <fstream>

namespace nnspod {

Prediction predict(const RomModel& model, const Eigen::VectorXd& param) {
    Prediction out;
    const Eigen::VectorXd ps = model.shift.scale_param(param);
    for (long k = 0; k < ps.size(); ++k)
        if (ps[k] < -model.extrapolation_guard || ps[k] > 1.0 + model.extrapolation_guard)
            out.extrapolated = true;

    const Eigen::VectorXd coeffs = model.rbf.evaluate(param);
    const Eigen::VectorXd scaled_ref = model.basis.modes * coeffs;
    const Eigen::VectorXd ref_frame = model.shift.unscale_field(scaled_ref);
    out.field = inverse_shift(model.shift, model.grid, ref_frame, param);
    return out;
}

double rel_l2(const Eigen::VectorXd& truth, const Eigen::VectorXd& approx) {
    if (truth.size() != approx.size()) throw std::invalid_argument("rel_l2: length mismatch");
    const double denom = truth.norm();
    if (denom == 0.0) throw std::invalid_argument("rel_l2: zero-norm truth");
    return (truth - approx).norm() / denom;
}

SpectrumReport spectrum_report(const Eigen::MatrixXd& raw_columns,
                               const Eigen::MatrixXd& transformed_columns) {
    if (raw_columns.rows() != transformed_columns.rows() ||
        raw_columns.cols() != transformed_columns.cols())
        throw std::invalid_argument("spectrum_report: shape mismatch");
    auto normalized = [](const Eigen::MatrixXd& m) {
        const Eigen::VectorXd sv = pod(m, {}).singular_values;
        return sv[0] > 0.0 ? Eigen::VectorXd(sv / sv[0]) : sv;
    };
    return {normalized(raw_columns), normalized(transformed_columns)};
}

void write_spectrum_csv(const SpectrumReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for write: " + path.string());
    out << "k,pod,nnspod\n";
    out.precision(17);
    for (long k = 0; k < report.raw.size(); ++k)
        out << (k + 1) << "," << report.raw[k] << "," << report.transformed[k] << "\n";
    if (!out) throw IoError("write failed: " + path.string());
}

namespace {

constexpr std::uint32_t kRomVersion = 1;

void write_mlp(BinWriter& w, const Mlp& net) {
    w.u32(static_cast<std::uint32_t>(net.layers().size()));
    for (const auto& layer : net.layers()) {
        w.u32(static_cast<std::uint32_t>(layer.activation));
        w.mat(layer.weights);
        w.vec(layer.biases);
    }
}

Mlp read_mlp(BinReader& r) {
    Mlp net;
    const auto n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
        MlpLayer layer;
        layer.activation = static_cast<Activation>(r.u32());
        layer.weights = r.mat();
        layer.biases = r.vec();
        net.layers().push_back(std::move(layer));
    }
    return net;
}

void write_grid(BinWriter& w, const Grid& grid) {
    w.u32(static_cast<std::uint32_t>(grid.dim()));
    for (int a = 0; a < grid.dim(); ++a) w.vec(grid.axis_nodes(a));
}

Grid read_grid(BinReader& r) {
    const auto dim = r.u32();
    if (dim == 1) return Grid::line(r.vec());
    if (dim == 2) {
        Eigen::VectorXd xs = r.vec();
        Eigen::VectorXd ys = r.vec();
        return Grid::structured(xs, ys);
    }
    throw IoError("rom container: bad grid dimension");
}

void write_report(BinWriter& w, const TrainReport& rep) {
    w.f64(rep.final_loss);
    w.u64(static_cast<std::uint64_t>(rep.epochs));
    w.u32(rep.threshold_met ? 1 : 0);
}

TrainReport read_report(BinReader& r) {
    TrainReport rep;
    rep.final_loss = r.f64();
    rep.epochs = static_cast<long>(r.u64());
    rep.threshold_met = r.u32() != 0;
    return rep;
}

} // namespace

void save_rom(const RomModel& model, const std::filesystem::path& path) {
    BinWriter w(path);
    w.u32(0x4d4f5253u);   // "SROM"
    w.u32(kRomVersion);
    write_grid(w, model.grid);
    w.str(model.field_name);

    w.mat(model.basis.modes);
    w.vec(model.basis.singular_values);
    w.u32(static_cast<std::uint32_t>(model.basis.rank));
    w.f64(model.basis.energy);

    w.mat(model.coefficients);

    w.u32(static_cast<std::uint32_t>(model.rbf.kernel()));
    w.f64(model.rbf.epsilon());
    w.u32(model.rbf.has_polynomial_tail() ? 1 : 0);
    w.mat(model.rbf.centers());
    w.mat(model.rbf.weights());

    write_mlp(w, model.shift.interp_net);
    write_mlp(w, model.shift.shift_net);
    w.u32((model.shift.shift_axes[0] ? 1u : 0u) | (model.shift.shift_axes[1] ? 2u : 0u));
    w.u64(static_cast<std::uint64_t>(model.shift.ref_index));
    w.vec(model.shift.ref_param);
    w.vec(model.shift.coord_min);
    w.vec(model.shift.coord_span);
    w.vec(model.shift.param_min);
    w.vec(model.shift.param_span);
    w.f64(model.shift.field_min);
    w.f64(model.shift.field_span);
    write_report(w, model.shift.interp_report);
    write_report(w, model.shift.shift_report);

    w.f64(model.extrapolation_guard);
    w.u64(model.config_hash);
    w.u64(model.seed);
    w.close();
}

RomModel load_rom(const std::filesystem::path& path) {
    BinReader r(path);
    if (r.u32() != 0x4d4f5253u)
        throw IoError("bad magic (not a rom container): " + path.string());
    const auto version = r.u32();
    if (version != kRomVersion)
        throw IoError("unsupported rom version " + std::to_string(version) + ": " + path.string());

    RomModel m{read_grid(r), {}, {}, {}, {}, "", 0.1, 0, 0};
    m.field_name = r.str();

    m.basis.modes = r.mat();
    m.basis.singular_values = r.vec();
    m.basis.rank = static_cast<int>(r.u32());
    m.basis.energy = r.f64();

    m.coefficients = r.mat();

    const auto kernel = static_cast<RbfKernel>(r.u32());
    const double epsilon = r.f64();
    const bool tail = r.u32() != 0;
    Eigen::MatrixXd centers = r.mat();
    Eigen::MatrixXd weights = r.mat();
    m.rbf = RbfMap::from_parts(std::move(centers), std::move(weights), kernel, epsilon, tail);

    m.shift.interp_net = read_mlp(r);
    m.shift.shift_net = read_mlp(r);
    const auto axes = r.u32();
    m.shift.shift_axes = {(axes & 1u) != 0, (axes & 2u) != 0};
    m.shift.ref_index = static_cast<long>(r.u64());
    m.shift.ref_param = r.vec();
    m.shift.coord_min = r.vec();
    m.shift.coord_span = r.vec();
    m.shift.param_min = r.vec();
    m.shift.param_span = r.vec();
    m.shift.field_min = r.f64();
    m.shift.field_span = r.f64();
    m.shift.interp_report = read_report(r);
    m.shift.shift_report = read_report(r);

    m.extrapolation_guard = r.f64();
    m.config_hash = r.u64();
    m.seed = r.u64();

    if (m.basis.modes.rows() != m.grid.size())
        throw IoError("rom container: basis does not match grid: " + path.string());
    return m;
}

} // namespace nnspod
