#include "nnspod/pipeline.hpp"
#include "nnspod/snapshot_io.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace nnspod {
namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

long resolve_reference(const PipelineConfig& cfg, const SnapshotSet& train) {
    if (cfg.reference_by_index) {
        if (cfg.reference_index < 0 || cfg.reference_index >= train.count())
            throw ConfigError("reference.index " + std::to_string(cfg.reference_index) +
                              " outside the training set (size " + std::to_string(train.count()) + ")");
        return cfg.reference_index;
    }
    if (train.param_dim() != 1)
        throw ConfigError("reference.param needs scalar parameters; use reference.index");
    long best = 0;
    double best_d = std::abs(train.params()(0, 0) - cfg.reference_param);
    for (long i = 1; i < train.count(); ++i) {
        const double d = std::abs(train.params()(i, 0) - cfg.reference_param);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void write_params_row(std::ofstream& out, const Eigen::VectorXd& p) {
    for (long k = 0; k < p.size(); ++k) out << (k ? "," : "") << fmt(p[k]);
}

std::map<std::string, std::string> read_kv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("missing file: " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

} // namespace

OfflineResult run_offline(const PipelineConfig& cfg) {
    using clock = std::chrono::steady_clock;
    PhaseTimes times;

    auto t0 = clock::now();
    const SnapshotSet full_set = build_case(cfg);
    times.generate = seconds_since(t0);

    auto [train, test] = split_train_test(full_set, cfg.split);
    const long ref_index = resolve_reference(cfg, train);

    t0 = clock::now();
    ShiftModel shift_model = train_interpnet(train, ref_index, cfg.train, cfg.shift_axes);
    times.interp = seconds_since(t0);

    t0 = clock::now();
    train_shiftnet(shift_model, train, cfg.train);
    times.shift = seconds_since(t0);

    t0 = clock::now();
    TransformedSet transformed = cfg.transform == TransformMode::Shift
                                     ? apply_shift_to_reference(shift_model, train)
                                     : transform_to_reference_by_interpolation(shift_model, train);
    times.transform = seconds_since(t0);

    t0 = clock::now();
    Eigen::MatrixXd scaled_cols(train.field_size(), train.count());
    Eigen::MatrixXd raw_scaled_cols(train.field_size(), train.count());
    for (long i = 0; i < train.count(); ++i) {
        scaled_cols.col(i) = shift_model.scale_field(transformed.snapshots.field_row(i));
        raw_scaled_cols.col(i) = shift_model.scale_field(train.field_row(i));
    }
    PodBasis basis = pod(scaled_cols, cfg.pod);
    Eigen::MatrixXd coeffs = project(basis, scaled_cols);

    Eigen::MatrixXd centers(train.count(), train.param_dim());
    for (long i = 0; i < train.count(); ++i)
        centers.row(i) = shift_model.scale_param(train.param_row(i)).transpose();
    RbfMap rbf = RbfMap::fit(centers, coeffs.transpose(), cfg.rbf_kernel, cfg.rbf_epsilon);
    times.rom = seconds_since(t0);

    OfflineResult result{
        RomModel{train.grid(), std::move(basis), std::move(coeffs), std::move(rbf),
                 std::move(shift_model), train.field_name(), cfg.extrapolation_guard,
                 config_hash(cfg), cfg.split.seed},
        std::move(train), std::move(test), spectrum_report(raw_scaled_cols, scaled_cols),
        {}, times};

    t0 = clock::now();
    result.train_errors.resize(result.train.count());
    for (long i = 0; i < result.train.count(); ++i) {
        const Prediction p = predict(result.model, result.train.param_row(i));
        result.train_errors[i] = rel_l2(result.train.field_row(i), p.field);
    }
    result.seconds.errors = seconds_since(t0);
    result.seconds.generate = times.generate;
    return result;
}

void write_offline_outputs(const OfflineResult& result, const PipelineConfig& cfg) {
    const auto& dir = cfg.output_dir;
    std::filesystem::create_directories(dir);
    save_rom(result.model, dir / "rom.srom");

    {
        std::ofstream out(dir / "config.echo.txt");
        if (!out) throw IoError("cannot open for write: " + (dir / "config.echo.txt").string());
        out << canonical_config(cfg);
    }
    write_spectrum_csv(result.spectrum, dir / "spectrum.csv");
    {
        std::ofstream out(dir / "train_errors.csv");
        if (!out) throw IoError("cannot open for write: " + (dir / "train_errors.csv").string());
        out << "mu,rel_l2\n";
        for (long i = 0; i < result.train.count(); ++i) {
            write_params_row(out, result.train.param_row(i));
            out << "," << fmt(result.train_errors[i]) << "\n";
        }
    }
    {
        std::ofstream out(dir / "offline_report.txt");
        if (!out) throw IoError("cannot open for write: " + (dir / "offline_report.txt").string());
        const auto& m = result.model;
        out << "config_hash=" << m.config_hash << "\n"
            << "seed=" << m.seed << "\n"
            << "n_train=" << result.train.count() << "\n"
            << "n_test=" << result.test.count() << "\n"
            << "interp_final_loss=" << fmt(m.shift.interp_report.final_loss) << "\n"
            << "interp_epochs=" << m.shift.interp_report.epochs << "\n"
            << "interp_threshold_met=" << (m.shift.interp_report.threshold_met ? 1 : 0) << "\n"
            << "shift_final_loss=" << fmt(m.shift.shift_report.final_loss) << "\n"
            << "shift_epochs=" << m.shift.shift_report.epochs << "\n"
            << "shift_threshold_met=" << (m.shift.shift_report.threshold_met ? 1 : 0) << "\n"
            << "pod_rank=" << m.basis.rank << "\n"
            << "pod_energy=" << fmt(m.basis.energy) << "\n"
            << "train_mean_rel_l2=" << fmt(result.train_errors.mean()) << "\n"
            << "seconds_generate=" << fmt(result.seconds.generate) << "\n"
            << "seconds_interp=" << fmt(result.seconds.interp) << "\n"
            << "seconds_shift=" << fmt(result.seconds.shift) << "\n"
            << "seconds_transform=" << fmt(result.seconds.transform) << "\n"
            << "seconds_rom=" << fmt(result.seconds.rom) << "\n"
            << "seconds_errors=" << fmt(result.seconds.errors) << "\n";
    }
}

OnlineResult run_online(const RomModel& model, const std::vector<Eigen::VectorXd>& params) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    OnlineResult result;
    for (const auto& p : params) {
        const Prediction pred = predict(model, p);
        result.rows.push_back({p, pred.field, std::nullopt, pred.extrapolated});
    }
    result.seconds = seconds_since(t0);
    return result;
}

OnlineResult run_online_with_truth(const RomModel& model, const PipelineConfig& cfg,
                                   OnlineSplit which) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const SnapshotSet full = build_case(cfg);
    if (!(full.grid() == model.grid))
        throw IoError("model/grid mismatch: configured case does not match the model grid");

    OnlineResult result;
    result.config_hash_match = config_hash(cfg) == model.config_hash;

    auto [train, test] = split_train_test(full, cfg.split);
    auto evaluate = [&](const SnapshotSet& set) {
        double sum = 0.0;
        for (long i = 0; i < set.count(); ++i) {
            const Prediction pred = predict(model, set.param_row(i));
            const double err = rel_l2(set.field_row(i), pred.field);
            sum += err;
            result.rows.push_back({set.param_row(i), pred.field, err, pred.extrapolated});
        }
        return sum / static_cast<double>(set.count());
    };
    if (which == OnlineSplit::Train || which == OnlineSplit::All)
        result.mean_train_error = evaluate(train);
    if (which == OnlineSplit::Test || which == OnlineSplit::All)
        result.mean_test_error = evaluate(test);
    result.seconds = seconds_since(t0);
    return result;
}

void write_online_outputs(const OnlineResult& result, const RomModel& model,
                          const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    if (!result.rows.empty()) {
        Eigen::MatrixXd params(static_cast<long>(result.rows.size()), result.rows[0].param.size());
        Eigen::MatrixXd fields(static_cast<long>(result.rows.size()), model.grid.size());
        for (size_t i = 0; i < result.rows.size(); ++i) {
            params.row(static_cast<long>(i)) = result.rows[i].param.transpose();
            fields.row(static_cast<long>(i)) = result.rows[i].field.transpose();
        }
        save_snapshots(SnapshotSet(model.grid, params, fields, model.field_name),
                       out_dir / "predictions", SnapshotFormat::Csv);
    }
    {
        std::ofstream out(out_dir / "errors.csv");
        if (!out) throw IoError("cannot open for write: " + (out_dir / "errors.csv").string());
        out << "mu,rel_l2,extrapolated\n";
        for (const auto& row : result.rows) {
            write_params_row(out, row.param);
            out << ",";
            if (row.error) out << fmt(*row.error);
            out << "," << (row.extrapolated ? 1 : 0) << "\n";
        }
    }
    {
        std::ofstream out(out_dir / "online_report.txt");
        if (!out) throw IoError("cannot open for write: " + (out_dir / "online_report.txt").string());
        out << "model_config_hash=" << model.config_hash << "\n";
        out << "config_hash_match=" << (result.config_hash_match ? 1 : 0) << "\n";
        out << "n_predictions=" << result.rows.size() << "\n";
        if (result.mean_train_error) out << "train_mean_rel_l2=" << fmt(*result.mean_train_error) << "\n";
        if (result.mean_test_error) out << "test_mean_rel_l2=" << fmt(*result.mean_test_error) << "\n";
        out << "seconds_online=" << fmt(result.seconds) << "\n";
    }
}

std::vector<std::string> write_run_summary(const std::filesystem::path& run_dir) {
    std::vector<std::string> missing;
    for (const char* name : {"offline_report.txt", "spectrum.csv", "train_errors.csv"})
        if (!std::filesystem::exists(run_dir / name)) missing.push_back(name);
    if (!missing.empty()) return missing;

    const auto offline = read_kv_file(run_dir / "offline_report.txt");
    const bool has_online = std::filesystem::exists(run_dir / "online_report.txt");
    std::map<std::string, std::string> online;
    if (has_online) online = read_kv_file(run_dir / "online_report.txt");

    bool hash_mismatch = false;
    if (has_online && online.count("model_config_hash") && offline.count("config_hash"))
        hash_mismatch = online.at("model_config_hash") != offline.at("config_hash") ||
                        online.at("config_hash_match") == "0";

    std::ofstream md(run_dir / "summary.md");
    if (!md) throw IoError("cannot open for write: " + (run_dir / "summary.md").string());
    md << "# Run summary\n\n";
    md << "- config hash: " << offline.at("config_hash") << "\n";
    md << "- seed: " << offline.at("seed") << "\n";
    md << "- train/test sizes: " << offline.at("n_train") << "/" << offline.at("n_test") << "\n";
    md << "- InterpNet: loss " << offline.at("interp_final_loss") << " after "
       << offline.at("interp_epochs") << " epochs (threshold met: "
       << offline.at("interp_threshold_met") << ")\n";
    md << "- ShiftNet: loss " << offline.at("shift_final_loss") << " after "
       << offline.at("shift_epochs") << " epochs (threshold met: "
       << offline.at("shift_threshold_met") << ")\n";
    md << "- POD rank " << offline.at("pod_rank") << ", energy " << offline.at("pod_energy") << "\n";
    md << "- train mean rel-L2: " << offline.at("train_mean_rel_l2") << "\n";
    if (has_online) {
        if (online.count("train_mean_rel_l2"))
            md << "- online train mean rel-L2: " << online.at("train_mean_rel_l2") << "\n";
        if (online.count("test_mean_rel_l2"))
            md << "- online test mean rel-L2: " << online.at("test_mean_rel_l2") << "\n";
        if (hash_mismatch)
            md << "\n**WARNING: online run used a different configuration than the offline "
                  "model (config-hash mismatch).**\n";
    }
    md << "\nPhase timings (seconds): generate " << offline.at("seconds_generate") << ", interp "
       << offline.at("seconds_interp") << ", shift " << offline.at("seconds_shift")
       << ", transform " << offline.at("seconds_transform") << ", rom "
       << offline.at("seconds_rom") << "\n";

    // Plot-ready merge: spectrum plus any error tables.
    std::ofstream csv(run_dir / "summary.csv");
    if (!csv) throw IoError("cannot open for write: " + (run_dir / "summary.csv").string());
    csv << "table,key,value1,value2\n";
    {
        std::ifstream spec(run_dir / "spectrum.csv");
        std::string line;
        std::getline(spec, line);
        while (std::getline(spec, line)) {
            std::stringstream ss(line);
            std::string k, a, b;
            std::getline(ss, k, ',');
            std::getline(ss, a, ',');
            std::getline(ss, b, ',');
            csv << "spectrum," << k << "," << a << "," << b << "\n";
        }
    }
    for (const char* table : {"train_errors.csv", "errors.csv"}) {
        if (!std::filesystem::exists(run_dir / table)) continue;
        std::ifstream err(run_dir / table);
        std::string line;
        std::getline(err, line);
        while (std::getline(err, line)) {
            std::stringstream ss(line);
            std::string mu, e;
            std::getline(ss, mu, ',');
            std::getline(ss, e, ',');
            csv << (table[0] == 't' ? "train_error," : "online_error,") << mu << "," << e << ",\n";
        }
    }
    return {};
}

} // namespace nnspod
