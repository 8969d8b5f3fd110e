#include "nnspod/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

using namespace nnspod;

PipelineConfig assemble_config(const std::string& preset_name, const std::string& config_path,
                               const std::vector<std::string>& overrides) {
    PipelineConfig cfg = preset_name.empty() ? PipelineConfig{} : preset(preset_name);
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    for (const auto& o : overrides) apply_override(cfg, o);

    if (cfg.output_dir.is_relative()) {
        if (const char* root = std::getenv("NNSPOD_OUT"))
            cfg.output_dir = std::filesystem::path(root) / cfg.output_dir;
    }
    return cfg;
}

std::vector<Eigen::VectorXd> parse_param_list(const std::string& text) {
    std::vector<Eigen::VectorXd> out;
    std::stringstream groups(text);
    std::string group;
    while (std::getline(groups, group, ';')) {
        if (group.empty()) continue;
        std::vector<double> vals;
        std::stringstream ss(group);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                size_t pos = 0;
                vals.push_back(std::stod(tok, &pos));
                if (pos != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ConfigError("bad parameter value '" + tok + "'");
            }
        }
        if (vals.empty()) throw ConfigError("empty parameter group in '" + text + "'");
        Eigen::VectorXd p(static_cast<long>(vals.size()));
        for (size_t k = 0; k < vals.size(); ++k) p[static_cast<long>(k)] = vals[k];
        out.push_back(std::move(p));
    }
    if (out.empty()) throw ConfigError("no parameters given");
    return out;
}

int cmd_gen(const PipelineConfig& cfg, const std::string& format) {
    const SnapshotSet set = build_case(cfg);
    const SnapshotFormat fmt = format == "binary" ? SnapshotFormat::Binary : SnapshotFormat::Csv;
    save_snapshots(set, cfg.output_dir, fmt);
    std::cout << "wrote " << set.count() << " snapshots x " << set.field_size()
              << " values to " << cfg.output_dir.string() << "\n";
    return 0;
}

int cmd_offline(const PipelineConfig& cfg) {
    const OfflineResult result = run_offline(cfg);
    write_offline_outputs(result, cfg);
    const auto& m = result.model;
    std::cout << "offline done: rank " << m.basis.rank << " (energy " << m.basis.energy
              << "), InterpNet loss " << m.shift.interp_report.final_loss
              << (m.shift.interp_report.threshold_met ? "" : " [threshold unmet]")
              << ", ShiftNet loss " << m.shift.shift_report.final_loss
              << (m.shift.shift_report.threshold_met ? "" : " [threshold unmet]")
              << ", train mean rel-L2 " << result.train_errors.mean() << "\n"
              << "model: " << (cfg.output_dir / "rom.srom").string() << "\n";
    return 0;
}

int cmd_online(const std::string& model_path, const PipelineConfig& cfg, bool have_cfg,
               const std::string& params_text, const std::string& split_name,
               const std::string& out_dir) {
    const RomModel model = load_rom(model_path);
    OnlineResult result;
    if (!params_text.empty()) {
        result = run_online(model, parse_param_list(params_text));
    } else if (have_cfg) {
        OnlineSplit which = OnlineSplit::Test;
        if (split_name == "train") which = OnlineSplit::Train;
        else if (split_name == "all") which = OnlineSplit::All;
        else if (split_name != "test") throw ConfigError("unknown split '" + split_name + "'");
        result = run_online_with_truth(model, cfg, which);
    } else {
        throw ConfigError("online needs --params or a case configuration (--preset/--config)");
    }
    const std::filesystem::path dir = out_dir.empty() ? cfg.output_dir : std::filesystem::path(out_dir);
    write_online_outputs(result, model, dir);
    std::cout << "online done: " << result.rows.size() << " predictions";
    if (result.mean_train_error) std::cout << ", train mean rel-L2 " << *result.mean_train_error;
    if (result.mean_test_error) std::cout << ", test mean rel-L2 " << *result.mean_test_error;
    if (!result.config_hash_match) std::cout << " [config-hash mismatch]";
    std::cout << "\n";
    return 0;
}

int cmd_report(const std::string& run_dir) {
    const auto missing = write_run_summary(run_dir);
    if (!missing.empty()) {
        std::cerr << "error: missing run artifacts in " << run_dir << ":";
        for (const auto& m : missing) std::cerr << " " << m;
        std::cerr << "\n";
        return 2;
    }
    std::cout << "wrote " << (std::filesystem::path(run_dir) / "summary.md").string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shift-augmented non-intrusive reduced-order modeling"};
    app.require_subcommand(1);

    std::string preset_name, config_path, out_dir, format = "csv";
    std::vector<std::string> overrides;
    auto add_config_opts = [&](CLI::App* cmd) {
        cmd->add_option("--preset", preset_name, "preset: wave1d, vortex2d or twophase");
        cmd->add_option("--config", config_path, "config file (section.key = value)");
        cmd->add_option("--set", overrides, "override, e.g. --set pod.energy=0.9999");
        cmd->add_option("--out", out_dir, "output directory (overrides output.dir)");
    };

    auto* gen = app.add_subcommand("gen", "generate a snapshot database");
    std::string gen_case;
    gen->add_option("case", gen_case, "gaussian | vortex | step")->required();
    add_config_opts(gen);
    gen->add_option("--format", format, "csv | binary")->check(CLI::IsMember({"csv", "binary"}));

    auto* offline = app.add_subcommand("offline", "train transform + build the reduced model");
    add_config_opts(offline);

    auto* online = app.add_subcommand("online", "predict with a trained model");
    std::string model_path, params_text, split_name = "test";
    online->add_option("--model", model_path, "path to rom.srom")->required();
    online->add_option("--params", params_text, "explicit parameters, e.g. \"2.0;4.5\"");
    online->add_option("--split", split_name, "test | train | all (needs case config)");
    add_config_opts(online);

    auto* report = app.add_subcommand("report", "summarize a run directory");
    std::string run_dir;
    report->add_option("dir", run_dir, "run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (report->parsed()) return cmd_report(run_dir);

        nnspod::PipelineConfig cfg;
        const bool have_cfg = !preset_name.empty() || !config_path.empty();
        if (gen->parsed()) {
            if (preset_name.empty() && config_path.empty()) {
                cfg = nnspod::PipelineConfig{};
                nnspod::apply_override(cfg, "case.type=" + gen_case);
                if (gen_case == "vortex") cfg.case_type = nnspod::CaseType::Vortex;
                for (const auto& o : overrides) nnspod::apply_override(cfg, o);
            } else {
                cfg = assemble_config(preset_name, config_path, overrides);
                nnspod::apply_override(cfg, "case.type=" + gen_case);
            }
            if (!out_dir.empty()) cfg.output_dir = out_dir;
            else if (cfg.output_dir == "run") cfg.output_dir = "data/" + gen_case;
            return cmd_gen(cfg, format);
        }
        cfg = assemble_config(preset_name, config_path, overrides);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (offline->parsed()) return cmd_offline(cfg);
        if (online->parsed())
            return cmd_online(model_path, cfg, have_cfg, params_text, split_name, out_dir);
    } catch (const nnspod::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nnspod::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const nnspod::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
