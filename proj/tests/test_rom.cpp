#include <doctest.h>

#include "nnspod/pipeline.hpp"
#include "nnspod/rom.hpp"

#include <fstream>

using namespace nnspod;

namespace {

std::filesystem::path temp_dir(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / "nnspod_test" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Down-scaled wave pipeline so offline runs in a couple of seconds.
PipelineConfig micro_config() {
    PipelineConfig cfg = preset("wave1d");
    cfg.gaussian.n_nodes = 96;
    cfg.gaussian.sigma = 0.5;
    cfg.gaussian.t_first = 2.0;
    cfg.gaussian.t_step = 0.7;
    cfg.gaussian.n_params = 10;
    cfg.train.interp = {0.03, 1e-5, 8000, 7001};
    cfg.train.shift = {0.0023, 1e-4, 300, 7002};
    return cfg;
}

std::string file_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("relative L2 error hand cases") {
    Eigen::VectorXd u(2), zero(2), partial(2);
    u << 3, 4;
    zero << 0, 0;
    partial << 3, 0;
    CHECK(rel_l2(u, u) == 0.0);
    CHECK(rel_l2(u, zero) == doctest::Approx(1.0));
    CHECK(rel_l2(u, partial) == doctest::Approx(0.8));
    CHECK_THROWS_AS(rel_l2(zero, u), std::invalid_argument);
    CHECK_THROWS_AS(rel_l2(u, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("spectrum report of identical inputs has identical columns") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(20, 6);
    const SpectrumReport report = spectrum_report(X, X);
    CHECK(report.raw == report.transformed);
    CHECK(report.raw[0] == doctest::Approx(1.0));
    const auto dir = temp_dir("spectrum");
    write_spectrum_csv(report, dir / "spectrum.csv");
    std::ifstream in(dir / "spectrum.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "k,pod,nnspod");
}

TEST_CASE("offline pipeline produces a collapsed basis and a loadable model") {
    const PipelineConfig cfg = micro_config();
    const OfflineResult result = run_offline(cfg);

    CHECK(result.model.basis.rank == 1);
    CHECK(result.model.basis.energy >= 0.999);
    CHECK(result.train_errors.maxCoeff() < 0.1);

    // predict at the reference parameter reproduces the reference snapshot
    const Prediction at_ref = predict(result.model, result.model.shift.ref_param);
    CHECK(rel_l2(result.train.field_row(result.model.shift.ref_index), at_ref.field) < 0.05);
    CHECK_FALSE(at_ref.extrapolated);

    // guard band flags far-out parameters without failing
    Eigen::VectorXd far(1);
    far << 50.0;
    CHECK(predict(result.model, far).extrapolated);

    const auto dir = temp_dir("rom_roundtrip");
    save_rom(result.model, dir / "rom.srom");
    const RomModel loaded = load_rom(dir / "rom.srom");
    CHECK(loaded.basis.modes == result.model.basis.modes);
    CHECK(loaded.coefficients == result.model.coefficients);
    CHECK(loaded.config_hash == result.model.config_hash);

    // loaded model predicts bit-identically
    Eigen::VectorXd mu(1);
    mu << 4.1;
    CHECK(predict(loaded, mu).field == predict(result.model, mu).field);
}

TEST_CASE("identical config and seed give byte-identical model files") {
    const PipelineConfig cfg = micro_config();
    const auto dir = temp_dir("determinism");
    const OfflineResult a = run_offline(cfg);
    const OfflineResult b = run_offline(cfg);
    save_rom(a.model, dir / "a.srom");
    save_rom(b.model, dir / "b.srom");
    CHECK(file_bytes(dir / "a.srom") == file_bytes(dir / "b.srom"));
}

TEST_CASE("online errors stay comparable between train and test splits") {
    const PipelineConfig cfg = micro_config();
    const OfflineResult off = run_offline(cfg);
    const OnlineResult on = run_online_with_truth(off.model, cfg, OnlineSplit::All);
    REQUIRE(on.mean_train_error);
    REQUIRE(on.mean_test_error);
    CHECK(*on.mean_train_error < 0.1);
    CHECK(*on.mean_test_error < 0.1);
    CHECK(on.config_hash_match);
}

TEST_CASE("corrupt model files are reported") {
    const auto dir = temp_dir("corrupt");
    {
        std::ofstream out(dir / "rom.srom", std::ios::binary);
        out << "not a model";
    }
    CHECK_THROWS_AS(load_rom(dir / "rom.srom"), IoError);
    CHECK_THROWS_AS(load_rom(dir / "missing.srom"), IoError);
}

TEST_CASE("offline outputs land in the run directory") {
    PipelineConfig cfg = micro_config();
    cfg.output_dir = temp_dir("offline_outputs");
    const OfflineResult result = run_offline(cfg);
    write_offline_outputs(result, cfg);
    for (const char* name :
         {"rom.srom", "config.echo.txt", "spectrum.csv", "train_errors.csv", "offline_report.txt"})
        CHECK(std::filesystem::exists(cfg.output_dir / name));

    const OnlineResult on = run_online_with_truth(result.model, cfg, OnlineSplit::Test);
    write_online_outputs(on, result.model, cfg.output_dir);
    CHECK(std::filesystem::exists(cfg.output_dir / "errors.csv"));
    CHECK(std::filesystem::exists(cfg.output_dir / "predictions" / "snapshots.csv"));

    CHECK(write_run_summary(cfg.output_dir).empty());
    CHECK(std::filesystem::exists(cfg.output_dir / "summary.md"));

    // an empty directory reports its missing artifacts
    const auto empty = temp_dir("no_artifacts");
    const auto missing = write_run_summary(empty);
    CHECK(missing.size() == 3);
}
