#include "nnspod/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace nnspod {
namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for " + key + ": '" + v + "'");
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const unsigned long long d = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad seed value for " + key + ": '" + v + "'");
    }
}

std::vector<int> to_layers(const std::string& key, const std::string& v) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) throw ConfigError("bad layer list for " + key + ": '" + v + "'");
        out.push_back(static_cast<int>(to_long(key, tok)));
        if (out.back() < 1) throw ConfigError("layer sizes must be positive: " + key);
    }
    if (out.empty()) throw ConfigError("empty layer list for " + key);
    return out;
}

std::string layers_str(const std::vector<int>& layers) {
    std::string s;
    for (size_t i = 0; i < layers.size(); ++i)
        s += (i ? "," : "") + std::to_string(layers[i]);
    return s;
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void set_key(PipelineConfig& c, const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    auto is = [&](const char* k) { return key == k; };

    // [case]
    if (is("case.type")) {
        if (v == "gaussian") c.case_type = CaseType::Gaussian;
        else if (v == "vortex") c.case_type = CaseType::Vortex;
        else if (v == "step") c.case_type = CaseType::Step;
        else if (v == "files") c.case_type = CaseType::Files;
        else throw ConfigError("unknown case.type '" + v + "'");
    } else if (is("case.dir")) c.case_dir = v;
    else if (is("case.format")) {
        if (v == "csv") c.case_format = SnapshotFormat::Csv;
        else if (v == "binary") c.case_format = SnapshotFormat::Binary;
        else throw ConfigError("unknown case.format '" + v + "'");
    }
    else if (is("case.alpha")) c.gaussian.alpha = to_double(key, v);
    else if (is("case.sigma")) c.gaussian.sigma = to_double(key, v);
    else if (is("case.x_min")) c.gaussian.x_min = to_double(key, v);
    else if (is("case.x_max")) c.gaussian.x_max = to_double(key, v);
    else if (is("case.n_nodes")) { c.gaussian.n_nodes = static_cast<int>(to_long(key, v));
                                   c.step.n_nodes = c.gaussian.n_nodes; }
    else if (is("case.t_first")) c.gaussian.t_first = to_double(key, v);
    else if (is("case.t_step")) c.gaussian.t_step = to_double(key, v);
    else if (is("case.n_params")) { c.gaussian.n_params = static_cast<int>(to_long(key, v));
                                    c.step.n_params = c.gaussian.n_params; }
    else if (is("case.b")) c.vortex.b = to_double(key, v);
    else if (is("case.gamma")) c.vortex.gamma = to_double(key, v);
    else if (is("case.u_inf")) c.vortex.u_inf = to_double(key, v);
    else if (is("case.v_inf")) c.vortex.v_inf = to_double(key, v);
    else if (is("case.center_x")) c.vortex.center_x = to_double(key, v);
    else if (is("case.center_y")) c.vortex.center_y = to_double(key, v);
    else if (is("case.domain_x")) c.vortex.domain_x = to_double(key, v);
    else if (is("case.domain_y")) c.vortex.domain_y = to_double(key, v);
    else if (is("case.nx")) c.vortex.nx = static_cast<int>(to_long(key, v));
    else if (is("case.ny")) c.vortex.ny = static_cast<int>(to_long(key, v));
    else if (is("case.dt")) c.vortex.dt = to_double(key, v);
    else if (is("case.n_snapshots")) c.vortex.n_snapshots = static_cast<int>(to_long(key, v));
    else if (is("case.h_first")) c.step.h_first = to_double(key, v);
    else if (is("case.h_last")) c.step.h_last = to_double(key, v);
    else if (is("case.sharpness")) c.step.sharpness = to_double(key, v);

    // [split]
    else if (is("split.strategy")) {
        if (v == "alternating") c.split.strategy = SplitStrategy::Alternating;
        else if (v == "random") c.split.strategy = SplitStrategy::Random;
        else throw ConfigError("unknown split.strategy '" + v + "'");
    }
    else if (is("split.fraction")) c.split.fraction = to_double(key, v);
    else if (is("split.seed")) c.split.seed = to_u64(key, v);

    // [reference]
    else if (is("reference.param")) { c.reference_param = to_double(key, v); c.reference_by_index = false; }
    else if (is("reference.index")) { c.reference_index = to_long(key, v); c.reference_by_index = c.reference_index >= 0; }

    // [interpnet] / [shiftnet]
    else if (is("interpnet.layers")) c.train.interp_layers = to_layers(key, v);
    else if (is("interpnet.activation")) c.train.interp_activation = activation_from_name(v);
    else if (is("interpnet.lr")) c.train.interp.lr = to_double(key, v);
    else if (is("interpnet.threshold")) c.train.interp.loss_threshold = to_double(key, v);
    else if (is("interpnet.max_epochs")) c.train.interp.max_epochs = to_long(key, v);
    else if (is("interpnet.seed")) c.train.interp.seed = to_u64(key, v);
    else if (is("shiftnet.layers")) c.train.shift_layers = to_layers(key, v);
    else if (is("shiftnet.activation")) c.train.shift_activation = activation_from_name(v);
    else if (is("shiftnet.lr")) c.train.shift.lr = to_double(key, v);
    else if (is("shiftnet.threshold")) c.train.shift.loss_threshold = to_double(key, v);
    else if (is("shiftnet.max_epochs")) c.train.shift.max_epochs = to_long(key, v);
    else if (is("shiftnet.seed")) c.train.shift.seed = to_u64(key, v);
    else if (is("shiftnet.axes")) {
        if (v == "x") c.shift_axes = {true, false};
        else if (v == "y") c.shift_axes = {false, true};
        else if (v == "xy") c.shift_axes = {true, true};
        else throw ConfigError("unknown shiftnet.axes '" + v + "' (use x, y or xy)");
    }

    // [train]
    else if (is("train.subsample_cap")) c.train.subsample_cap = to_long(key, v);
    else if (is("train.scan_cap")) c.train.scan_cap = to_long(key, v);
    else if (is("train.pretrain_epochs")) c.train.pretrain_epochs = to_long(key, v);
    else if (is("train.pretrain_lr")) c.train.pretrain_lr = to_double(key, v);

    // [transform]
    else if (is("transform.mode")) {
        if (v == "shift") c.transform = TransformMode::Shift;
        else if (v == "interp") c.transform = TransformMode::Interp;
        else throw ConfigError("unknown transform.mode '" + v + "'");
    }

    // [pod]
    else if (is("pod.rank")) c.pod.rank = static_cast<int>(to_long(key, v));
    else if (is("pod.energy")) c.pod.energy = to_double(key, v);
    else if (is("pod.method")) {
        if (v == "auto") c.pod.method = PodOptions::Method::Auto;
        else if (v == "direct") c.pod.method = PodOptions::Method::Direct;
        else if (v == "gram") c.pod.method = PodOptions::Method::Gram;
        else throw ConfigError("unknown pod.method '" + v + "'");
    }

    // [rbf]
    else if (is("rbf.kernel")) c.rbf_kernel = rbf_kernel_from_name(v);
    else if (is("rbf.epsilon")) c.rbf_epsilon = to_double(key, v);

    // [online]
    else if (is("online.guard")) c.extrapolation_guard = to_double(key, v);

    // [output]
    else if (is("output.dir")) c.output_dir = v;

    else throw ConfigError("unknown config key '" + key + "'");
}

} // namespace

PipelineConfig preset(const std::string& name) {
    PipelineConfig c;
    c.train.interp.seed = 7001;
    c.train.shift.seed = 7002;
    if (name == "wave1d") {
        c.case_type = CaseType::Gaussian;
        c.split = {SplitStrategy::Alternating, 0.5, 1};
        c.reference_param = 3.25;
        c.shift_axes = {true, false};
        c.train.interp_layers = {10, 10};
        c.train.interp_activation = Activation::Softplus;
        c.train.interp = {0.03, 1e-6, 60000, 7001};
        c.train.shift_layers = {10, 4};
        c.train.shift_activation = Activation::LeakyRelu;
        c.train.shift = {0.0023, 1e-2, 2000, 7002};
        c.pod = {0, 0.999, PodOptions::Method::Auto};
        c.output_dir = "runs/wave1d";
    } else if (name == "vortex2d") {
        c.case_type = CaseType::Vortex;
        c.vortex.nx = 120;   // desk-scale default; the generator default stays 240x120
        c.vortex.ny = 60;
        c.split = {SplitStrategy::Random, 0.8, 3};
        c.reference_param = 0.625;
        c.shift_axes = {true, false};
        c.train.interp_layers = {40, 40};
        c.train.interp_activation = Activation::Sigmoid;
        c.train.interp = {0.01, 1.5e-6, 30000, 7001};
        c.train.shift_layers = {10, 4};
        c.train.shift_activation = Activation::LeakyRelu;
        c.train.shift = {0.03, 0.0024, 2000, 7002};
        c.pod = {0, 0.999, PodOptions::Method::Auto};
        c.output_dir = "runs/vortex2d";
    } else if (name == "twophase") {
        c.case_type = CaseType::Step;
        c.split = {SplitStrategy::Random, 0.8, 5};
        c.reference_param = 1.0;    // completely-filled configuration
        c.shift_axes = {true, false};
        c.train.interp_layers = {30, 30};
        c.train.interp_activation = Activation::LeakyRelu;
        c.train.interp = {0.0023, 5e-7, 40000, 7001};
        c.train.shift_layers = {10, 4};
        c.train.shift_activation = Activation::LeakyRelu;
        c.train.shift = {0.03, 5e-4, 2000, 7002};
        c.transform = TransformMode::Interp;
        c.pod = {0, 0.999, PodOptions::Method::Auto};
        c.output_dir = "runs/twophase";
    } else {
        throw ConfigError("unknown preset '" + name + "' (use wave1d, vortex2d or twophase)");
    }
    return c;
}

void apply_override(PipelineConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like section.key=value: '" + assignment + "'");
    const std::string key = trim(assignment.substr(0, eq));
    if (key.find('.') == std::string::npos)
        throw ConfigError("override key needs a section prefix: '" + key + "'");
    set_key(cfg, key, assignment.substr(eq + 1));
}

void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::string line, section;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        if (section.empty())
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": key outside any section");
        try {
            set_key(cfg, section + "." + trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

std::string canonical_config(const PipelineConfig& c) {
    std::map<std::string, std::string> kv;
    kv["case.type"] = c.case_type == CaseType::Gaussian ? "gaussian"
                    : c.case_type == CaseType::Vortex   ? "vortex"
                    : c.case_type == CaseType::Step     ? "step"
                                                        : "files";
    switch (c.case_type) {
        case CaseType::Gaussian:
            kv["case.alpha"] = fmt_double(c.gaussian.alpha);
            kv["case.sigma"] = fmt_double(c.gaussian.sigma);
            kv["case.x_min"] = fmt_double(c.gaussian.x_min);
            kv["case.x_max"] = fmt_double(c.gaussian.x_max);
            kv["case.n_nodes"] = std::to_string(c.gaussian.n_nodes);
            kv["case.t_first"] = fmt_double(c.gaussian.t_first);
            kv["case.t_step"] = fmt_double(c.gaussian.t_step);
            kv["case.n_params"] = std::to_string(c.gaussian.n_params);
            break;
        case CaseType::Vortex:
            kv["case.b"] = fmt_double(c.vortex.b);
            kv["case.gamma"] = fmt_double(c.vortex.gamma);
            kv["case.u_inf"] = fmt_double(c.vortex.u_inf);
            kv["case.v_inf"] = fmt_double(c.vortex.v_inf);
            kv["case.center_x"] = fmt_double(c.vortex.center_x);
            kv["case.center_y"] = fmt_double(c.vortex.center_y);
            kv["case.domain_x"] = fmt_double(c.vortex.domain_x);
            kv["case.domain_y"] = fmt_double(c.vortex.domain_y);
            kv["case.nx"] = std::to_string(c.vortex.nx);
            kv["case.ny"] = std::to_string(c.vortex.ny);
            kv["case.dt"] = fmt_double(c.vortex.dt);
            kv["case.n_snapshots"] = std::to_string(c.vortex.n_snapshots);
            break;
        case CaseType::Step:
            kv["case.h_first"] = fmt_double(c.step.h_first);
            kv["case.h_last"] = fmt_double(c.step.h_last);
            kv["case.n_params"] = std::to_string(c.step.n_params);
            kv["case.sharpness"] = fmt_double(c.step.sharpness);
            kv["case.n_nodes"] = std::to_string(c.step.n_nodes);
            break;
        case CaseType::Files:
            kv["case.dir"] = c.case_dir.string();
            kv["case.format"] = c.case_format == SnapshotFormat::Csv ? "csv" : "binary";
            break;
    }
    kv["split.strategy"] = c.split.strategy == SplitStrategy::Alternating ? "alternating" : "random";
    kv["split.fraction"] = fmt_double(c.split.fraction);
    kv["split.seed"] = std::to_string(c.split.seed);
    if (c.reference_by_index)
        kv["reference.index"] = std::to_string(c.reference_index);
    else
        kv["reference.param"] = fmt_double(c.reference_param);
    kv["interpnet.layers"] = layers_str(c.train.interp_layers);
    kv["interpnet.activation"] = activation_name(c.train.interp_activation);
    kv["interpnet.lr"] = fmt_double(c.train.interp.lr);
    kv["interpnet.threshold"] = fmt_double(c.train.interp.loss_threshold);
    kv["interpnet.max_epochs"] = std::to_string(c.train.interp.max_epochs);
    kv["interpnet.seed"] = std::to_string(c.train.interp.seed);
    kv["shiftnet.layers"] = layers_str(c.train.shift_layers);
    kv["shiftnet.activation"] = activation_name(c.train.shift_activation);
    kv["shiftnet.lr"] = fmt_double(c.train.shift.lr);
    kv["shiftnet.threshold"] = fmt_double(c.train.shift.loss_threshold);
    kv["shiftnet.max_epochs"] = std::to_string(c.train.shift.max_epochs);
    kv["shiftnet.seed"] = std::to_string(c.train.shift.seed);
    kv["shiftnet.axes"] = c.shift_axes[0] && c.shift_axes[1] ? "xy" : (c.shift_axes[0] ? "x" : "y");
    kv["train.subsample_cap"] = std::to_string(c.train.subsample_cap);
    kv["train.scan_cap"] = std::to_string(c.train.scan_cap);
    kv["train.pretrain_epochs"] = std::to_string(c.train.pretrain_epochs);
    kv["train.pretrain_lr"] = fmt_double(c.train.pretrain_lr);
    kv["transform.mode"] = c.transform == TransformMode::Shift ? "shift" : "interp";
    kv["pod.rank"] = std::to_string(c.pod.rank);
    kv["pod.energy"] = fmt_double(c.pod.energy);
    kv["pod.method"] = c.pod.method == PodOptions::Method::Auto ? "auto"
                     : c.pod.method == PodOptions::Method::Direct ? "direct" : "gram";
    kv["rbf.kernel"] = rbf_kernel_name(c.rbf_kernel);
    kv["rbf.epsilon"] = fmt_double(c.rbf_epsilon);
    kv["online.guard"] = fmt_double(c.extrapolation_guard);

    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

std::uint64_t config_hash(const PipelineConfig& cfg) {
    const std::string text = canonical_config(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

SnapshotSet build_case(const PipelineConfig& cfg) {
    switch (cfg.case_type) {
        case CaseType::Gaussian: return gen_gaussian(cfg.gaussian);
        case CaseType::Vortex: return gen_vortex_density(cfg.vortex);
        case CaseType::Step: return gen_step_interface(cfg.step);
        case CaseType::Files: return load_snapshots(cfg.case_dir, cfg.case_format);
    }
    throw ConfigError("unreachable case type");
}

} // namespace nnspod
