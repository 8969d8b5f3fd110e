#include <doctest.h>

#include "nnspod/testcases.hpp"

#include <cmath>
#include <numbers>

using namespace nnspod;

TEST_CASE("gaussian wave hits alpha at its mean and is symmetric") {
    GaussianWaveSpec spec;
    const SnapshotSet set = gen_gaussian(spec);
    REQUIRE(set.count() == 20);
    REQUIRE(set.field_size() == 256);
    CHECK(set.fields().minCoeff() > 0.0);
    CHECK(set.fields().maxCoeff() <= 1.0);

    // even about the mean: f(t + d) and f(t - d) agree
    const double inv2s2 = 1.0 / (2.0 * spec.sigma * spec.sigma);
    auto eval = [&](double x, double t) {
        return spec.alpha * std::exp(-(x - t) * (x - t) * inv2s2);
    };
    for (long i = 0; i < set.count(); ++i) {
        const double t = set.scalar_param(i);
        CHECK(eval(t, t) == spec.alpha);
        for (double d : {0.1, 0.37, 1.2})
            CHECK(std::abs(eval(t + d, t) - eval(t - d, t)) < 1e-14);
    }
    // grid value at the node nearest a mean is close to alpha
    const auto& xs = set.grid().axis_nodes(0);
    const double t0 = set.scalar_param(0);
    long nearest = 0;
    for (long j = 1; j < xs.size(); ++j)
        if (std::abs(xs[j] - t0) < std::abs(xs[nearest] - t0)) nearest = j;
    CHECK(set.fields()(0, nearest) > 0.99);
}

TEST_CASE("gaussian snapshots are exact translates of the reference") {
    GaussianWaveSpec spec;
    const SnapshotSet set = gen_gaussian(spec);
    const double t_ref = set.scalar_param(5);
    const double inv2s2 = 1.0 / (2.0 * spec.sigma * spec.sigma);
    double max_err = 0.0;
    for (long i = 0; i < set.count(); ++i) {
        const double shift = set.scalar_param(i) - t_ref;
        for (long j = 0; j < set.field_size(); ++j) {
            const double x = set.grid().coords()(j, 0);
            const double translated = std::exp(-(x - shift - t_ref) * (x - shift - t_ref) * inv2s2);
            max_err = std::max(max_err, std::abs(set.fields()(i, j) - translated));
        }
    }
    CHECK(max_err < 1e-12);
}

TEST_CASE("vortex density matches the analytic center value") {
    VortexSpec spec;
    spec.nx = 80;
    spec.ny = 40;
    spec.n_snapshots = 10;
    const SnapshotSet set = gen_vortex_density(spec);

    // direct scalar evaluation as the oracle
    const double g = spec.gamma;
    const double center = std::pow(
        1.0 - (g - 1.0) * spec.b * spec.b * std::numbers::e / (8.0 * g * std::numbers::pi * std::numbers::pi),
        1.0 / (g - 1.0));
    CHECK(center == doctest::Approx(0.99386).epsilon(1e-4));
    CHECK(vortex_density_at(spec, 0.0) == doctest::Approx(center).epsilon(1e-14));

    // far field tends to the freestream density
    CHECK(vortex_density_at(spec, 50.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(set.fields().maxCoeff() <= 1.0 + 1e-14);
    CHECK(set.fields().minCoeff() > center - 1e-6);
}

TEST_CASE("vortex minimum tracks the advected center") {
    VortexSpec spec;
    spec.nx = 240;
    spec.ny = 120;
    spec.n_snapshots = 100;
    const SnapshotSet set = gen_vortex_density(spec);
    const long last = set.count() - 1;
    REQUIRE(set.scalar_param(last) == doctest::Approx(62.5));

    long argmin = 0;
    for (long j = 1; j < set.field_size(); ++j)
        if (set.fields()(last, j) < set.fields()(last, argmin)) argmin = j;
    const double cx = set.grid().coords()(argmin, 0);
    const double cy = set.grid().coords()(argmin, 1);
    const double dx = spec.domain_x / spec.nx, dy = spec.domain_y / spec.ny;
    CHECK(std::abs(cx - 11.25) <= dx);
    CHECK(std::abs(cy - 10.0) <= dy);
}

TEST_CASE("vortex deficit mass is conserved through time") {
    VortexSpec spec;
    spec.nx = 120;
    spec.ny = 60;
    spec.n_snapshots = 20;
    const SnapshotSet set = gen_vortex_density(spec);
    Eigen::VectorXd deficit(set.count());
    for (long i = 0; i < set.count(); ++i)
        deficit[i] = (1.0 - set.fields().row(i).array()).sum();
    const double ref = deficit[0];
    for (long i = 1; i < set.count(); ++i)
        CHECK(std::abs(deficit[i] - ref) / ref < 0.005);
}

TEST_CASE("step interface limits and translation") {
    StepInterfaceSpec spec;
    const SnapshotSet set = gen_step_interface(spec);
    const auto& ys = set.grid().axis_nodes(0);
    for (long i = 0; i < set.count(); ++i) {
        const double h = spec.h_first + (spec.h_last - spec.h_first) * set.scalar_param(i);
        for (long j = 0; j < set.field_size(); ++j) {
            if (ys[j] < h - 5 * spec.sharpness) CHECK(set.fields()(i, j) > 0.999);
            if (ys[j] > h + 5 * spec.sharpness) CHECK(set.fields()(i, j) < 0.001);
        }
    }
}

TEST_CASE("constant interface position gives identical snapshots") {
    StepInterfaceSpec spec;
    spec.h_first = spec.h_last = 0.5;
    spec.n_params = 5;
    const SnapshotSet set = gen_step_interface(spec);
    for (long i = 1; i < set.count(); ++i)
        CHECK(set.fields().row(i) == set.fields().row(0));
}

TEST_CASE("generators validate their specs") {
    GaussianWaveSpec g;
    g.sigma = 0.0;
    CHECK_THROWS_AS(gen_gaussian(g), std::invalid_argument);
    VortexSpec v;
    v.gamma = 1.0;
    CHECK_THROWS_AS(gen_vortex_density(v), std::invalid_argument);
    StepInterfaceSpec s;
    s.h_first = 0.0;
    CHECK_THROWS_AS(gen_step_interface(s), std::invalid_argument);
}
