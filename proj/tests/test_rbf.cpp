#include <doctest.h>

#include "nnspod/rbf.hpp"
#include "nnspod/rng.hpp"

using namespace nnspod;

TEST_CASE("interpolation conditions hold at every center") {
    Rng rng(4);
    Eigen::MatrixXd centers(9, 1);
    for (long i = 0; i < 9; ++i) centers(i, 0) = 0.1 * static_cast<double>(i) + 0.01 * rng.next_double();
    Eigen::MatrixXd values(9, 3);
    for (long i = 0; i < 9; ++i)
        for (long j = 0; j < 3; ++j) values(i, j) = rng.uniform(-2.0, 2.0);

    // shape parameter of order 1/spacing keeps the smooth kernels well posed
    for (auto kernel : {RbfKernel::ThinPlate, RbfKernel::Gaussian, RbfKernel::Multiquadric}) {
        const RbfMap map = RbfMap::fit(centers, values, kernel, 8.0);
        for (long i = 0; i < 9; ++i) {
            const Eigen::VectorXd out = map.evaluate(centers.row(i).transpose());
            CHECK((out - values.row(i).transpose()).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("two centers interpolate exactly") {
    Eigen::MatrixXd centers(2, 1), values(2, 1);
    centers << 0.0, 1.0;
    values << 3.0, -1.0;
    const RbfMap map = RbfMap::fit(centers, values, RbfKernel::ThinPlate);
    CHECK(map.evaluate(centers.row(0).transpose())[0] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(map.evaluate(centers.row(1).transpose())[0] == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("thin plate with linear tail reproduces linear data everywhere") {
    Eigen::MatrixXd centers(7, 1);
    centers << 0.0, 0.15, 0.3, 0.45, 0.6, 0.8, 1.0;
    Eigen::MatrixXd values(7, 2);
    for (long i = 0; i < 7; ++i) {
        values(i, 0) = 2.0 * centers(i, 0) - 0.5;
        values(i, 1) = -1.25 * centers(i, 0) + 4.0;
    }
    const RbfMap map = RbfMap::fit(centers, values, RbfKernel::ThinPlate);
    for (double mu : {0.05, 0.37, 0.71, 0.99, 1.2, -0.1}) {
        Eigen::VectorXd p(1);
        p << mu;
        const Eigen::VectorXd out = map.evaluate(p);
        CHECK(std::abs(out[0] - (2.0 * mu - 0.5)) < 1e-8);
        CHECK(std::abs(out[1] - (-1.25 * mu + 4.0)) < 1e-8);
    }
}

TEST_CASE("duplicate centers are rejected") {
    Eigen::MatrixXd centers(3, 1), values(3, 1);
    centers << 0.0, 0.5, 0.5;
    values << 1.0, 2.0, 3.0;
    CHECK_THROWS_AS(RbfMap::fit(centers, values, RbfKernel::ThinPlate), std::invalid_argument);
}

TEST_CASE("round trip through from_parts preserves evaluation") {
    Rng rng(8);
    Eigen::MatrixXd centers(5, 2), values(5, 1);
    for (long i = 0; i < 5; ++i) {
        centers(i, 0) = rng.next_double();
        centers(i, 1) = rng.next_double();
        values(i, 0) = rng.uniform(-1, 1);
    }
    const RbfMap map = RbfMap::fit(centers, values, RbfKernel::Gaussian, 1.5);
    const RbfMap copy = RbfMap::from_parts(map.centers(), map.weights(), map.kernel(),
                                           map.epsilon(), map.has_polynomial_tail());
    Eigen::VectorXd p(2);
    p << 0.33, 0.66;
    CHECK(map.evaluate(p) == copy.evaluate(p));
}
