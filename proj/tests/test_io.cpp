#include <doctest.h>

#include "nnspod/snapshot_io.hpp"
#include "nnspod/testcases.hpp"

#include <fstream>

using namespace nnspod;

namespace {

std::filesystem::path temp_dir(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / "nnspod_test" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("csv round trip reproduces the gaussian set") {
    const SnapshotSet set = gen_gaussian({});
    const auto dir = temp_dir("csv_gauss");
    save_snapshots(set, dir, SnapshotFormat::Csv);
    const SnapshotSet back = load_snapshots(dir, SnapshotFormat::Csv);
    REQUIRE(back.count() == set.count());
    REQUIRE(back.grid() == set.grid());
    CHECK((back.params() - set.params()).cwiseAbs().maxCoeff() == 0.0);
    const double scale = set.fields().cwiseAbs().maxCoeff();
    CHECK((back.fields() - set.fields()).cwiseAbs().maxCoeff() <= 1e-15 * scale);
}

TEST_CASE("binary round trip of the full-size vortex set is bit exact") {
    const SnapshotSet set = gen_vortex_density({});   // 100 x 28800
    REQUIRE(set.field_size() == 28800);
    const auto dir = temp_dir("bin_vortex");
    save_snapshots(set, dir, SnapshotFormat::Binary);
    const SnapshotSet back = load_snapshots(dir, SnapshotFormat::Binary);
    REQUIRE(back.grid() == set.grid());
    CHECK(back.params() == set.params());
    CHECK(back.fields() == set.fields());
}

TEST_CASE("csv round trip of a 2d set stays within 1e-12") {
    VortexSpec spec;
    spec.nx = 24;
    spec.ny = 12;
    spec.n_snapshots = 5;
    const SnapshotSet set = gen_vortex_density(spec);
    const auto dir = temp_dir("csv_vortex");
    save_snapshots(set, dir, SnapshotFormat::Csv);
    const SnapshotSet back = load_snapshots(dir, SnapshotFormat::Csv);
    CHECK((back.fields() - set.fields()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((back.grid().coords() - set.grid().coords()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("missing param column is named in the error") {
    const auto dir = temp_dir("bad_header");
    {
        std::ofstream g(dir / "grid.csv");
        g << "x0\n0\n1\n";
        std::ofstream s(dir / "snapshots.csv");
        s << "f0,f1\n0.5,0.25\n";
    }
    try {
        load_snapshots(dir, SnapshotFormat::Csv);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("mu0") != std::string::npos);
    }
}

TEST_CASE("ragged and NaN rows are rejected") {
    const auto dir = temp_dir("bad_rows");
    {
        std::ofstream g(dir / "grid.csv");
        g << "x0\n0\n1\n";
        std::ofstream s(dir / "snapshots.csv");
        s << "mu0,f0,f1\n1.0,0.5\n";
    }
    CHECK_THROWS_AS(load_snapshots(dir, SnapshotFormat::Csv), IoError);
    {
        std::ofstream s(dir / "snapshots.csv");
        s << "mu0,f0,f1\n1.0,nan,0.5\n";
    }
    CHECK_THROWS_AS(load_snapshots(dir, SnapshotFormat::Csv), IoError);
}

TEST_CASE("missing files give structured errors naming the path") {
    const auto dir = temp_dir("empty");
    try {
        load_snapshots(dir / "nowhere", SnapshotFormat::Binary);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("nowhere") != std::string::npos);
    }
}
