#include <doctest.h>

#include "nnspod/mlp.hpp"
#include "nnspod/rng.hpp"

#include <cmath>

using namespace nnspod;

namespace {

/// Scalar loss L = sum of squared outputs over the batch; simple enough to
/// difference numerically but exercises every parameter.
double sq_loss(const Mlp& net, const Eigen::MatrixXd& x) {
    return net.forward(x).squaredNorm();
}

MlpGradients analytic_sq_grad(const Mlp& net, const Eigen::MatrixXd& x) {
    Mlp::Trace trace;
    const Eigen::MatrixXd out = net.forward(x, trace);
    return net.backward(trace, 2.0 * out);
}

double max_rel_fd_error(Mlp net, const Eigen::MatrixXd& x, double step) {
    const MlpGradients g = analytic_sq_grad(net, x);
    double worst = 0.0;
    auto check = [&](double& param, double analytic) {
        const double keep = param;
        param = keep + step;
        const double lp = sq_loss(net, x);
        param = keep - step;
        const double lm = sq_loss(net, x);
        param = keep;
        const double numeric = (lp - lm) / (2.0 * step);
        const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
        worst = std::max(worst, std::abs(analytic - numeric) / denom);
    };
    for (size_t l = 0; l < net.layers().size(); ++l) {
        auto& layer = net.layers()[l];
        for (long r = 0; r < layer.weights.rows(); ++r)
            for (long c = 0; c < layer.weights.cols(); ++c)
                check(layer.weights(r, c), g.weights[l](r, c));
        for (long r = 0; r < layer.biases.size(); ++r)
            check(layer.biases[r], g.biases[l][r]);
    }
    return worst;
}

double max_rel_input_fd_error(const Mlp& net, Eigen::MatrixXd x, double step) {
    const MlpGradients g = analytic_sq_grad(net, x);
    double worst = 0.0;
    for (long r = 0; r < x.rows(); ++r)
        for (long c = 0; c < x.cols(); ++c) {
            const double keep = x(r, c);
            x(r, c) = keep + step;
            const double lp = sq_loss(net, x);
            x(r, c) = keep - step;
            const double lm = sq_loss(net, x);
            x(r, c) = keep;
            const double numeric = (lp - lm) / (2.0 * step);
            const double denom = std::max({std::abs(g.input(r, c)), std::abs(numeric), 1e-8});
            worst = std::max(worst, std::abs(g.input(r, c) - numeric) / denom);
        }
    return worst;
}

} // namespace

TEST_CASE("identity net with zero weights outputs its biases") {
    Mlp net = Mlp::create({3, 2}, Activation::Identity, Activation::Identity, 1);
    net.layers()[0].weights.setZero();
    net.layers()[0].biases << 0.3, -0.7;
    const Eigen::MatrixXd out = net.forward(Eigen::MatrixXd::Random(5, 3));
    for (long i = 0; i < out.rows(); ++i) {
        CHECK(out(i, 0) == doctest::Approx(0.3));
        CHECK(out(i, 1) == doctest::Approx(-0.7));
    }
}

TEST_CASE("sigmoid of zero is one half") {
    Mlp net = Mlp::create({2, 1}, Activation::Sigmoid, Activation::Sigmoid, 1);
    net.layers()[0].weights.setZero();
    net.layers()[0].biases.setZero();
    CHECK(net.forward(Eigen::MatrixXd::Random(4, 2))(2, 0) == doctest::Approx(0.5));
}

TEST_CASE("seeded construction is reproducible; different seeds differ") {
    const Mlp a = Mlp::create({4, 10, 1}, Activation::Softplus, Activation::Identity, 42);
    const Mlp b = Mlp::create({4, 10, 1}, Activation::Softplus, Activation::Identity, 42);
    const Mlp c = Mlp::create({4, 10, 1}, Activation::Softplus, Activation::Identity, 43);
    CHECK(a.layers()[0].weights == b.layers()[0].weights);
    CHECK(a.layers()[1].biases == b.layers()[1].biases);
    CHECK(a.layers()[0].weights != c.layers()[0].weights);

    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(7, 4);
    CHECK(a.forward(x) == b.forward(x));
}

TEST_CASE("initial weights stay within 1/sqrt(fan_in)") {
    const Mlp net = Mlp::create({9, 5, 2}, Activation::Sigmoid, Activation::Identity, 7);
    CHECK(net.layers()[0].weights.cwiseAbs().maxCoeff() <= 1.0 / 3.0);
    CHECK(net.layers()[1].weights.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(5.0));
}

TEST_CASE("linear layer gradients have the closed form") {
    Mlp net = Mlp::create({3, 2}, Activation::Identity, Activation::Identity, 5);
    Eigen::MatrixXd x(1, 3);
    x << 0.5, -1.0, 2.0;
    Mlp::Trace trace;
    net.forward(x, trace);
    Eigen::MatrixXd upstream(1, 2);
    upstream << 1.0, -2.0;
    const MlpGradients g = net.backward(trace, upstream);
    CHECK(g.weights[0] == upstream.transpose() * x);
    CHECK(g.biases[0] == upstream.transpose());
    CHECK(g.input == upstream * net.layers()[0].weights);
}

TEST_CASE("two-layer softplus gradients match central differences") {
    const Mlp net = Mlp::create({2, 8, 6, 1}, Activation::Softplus, Activation::Identity, 11);
    const Eigen::MatrixXd x = 0.7 * Eigen::MatrixXd::Random(5, 2);
    CHECK(max_rel_fd_error(net, x, 1e-6) < 1e-5);
    CHECK(max_rel_input_fd_error(net, x, 1e-6) < 1e-5);
}

TEST_CASE("gradients check out for every activation on random nets") {
    for (auto act : {Activation::Softplus, Activation::Sigmoid, Activation::LeakyRelu,
                     Activation::Identity}) {
        for (unsigned long long seed : {1ull, 2ull, 3ull}) {
            const Mlp net = Mlp::create({3, 6, 4, 2}, act, Activation::Identity, seed);
            Rng rng(seed + 100);
            Eigen::MatrixXd x(4, 3);
            for (long r = 0; r < x.rows(); ++r)
                for (long c = 0; c < x.cols(); ++c) x(r, c) = rng.uniform(-1.0, 1.0);
            // LeakyReLU kinks make finite differences noisy exactly at 0;
            // random inputs keep pre-activations away from the kink.
            CHECK(max_rel_fd_error(net, x, 1e-6) < 1e-5);
            CHECK(max_rel_input_fd_error(net, x, 1e-6) < 1e-5);
        }
    }
}

TEST_CASE("softplus and sigmoid stay finite over [-500, 500]") {
    Eigen::ArrayXXd z(1, 5);
    z << -500.0, -30.0, 0.0, 30.0, 500.0;
    const auto sp = apply_activation(Activation::Softplus, z);
    const auto sg = apply_activation(Activation::Sigmoid, z);
    CHECK(sp.isFinite().all());
    CHECK(sg.isFinite().all());
    CHECK(sp(0, 0) >= 0.0);
    CHECK(sp(0, 4) == doctest::Approx(500.0));
    CHECK(sg(0, 0) == doctest::Approx(0.0));
    CHECK(sg(0, 4) == doctest::Approx(1.0));
}

TEST_CASE("adam leaves parameters alone under zero gradients") {
    Mlp net = Mlp::create({2, 3, 1}, Activation::Sigmoid, Activation::Identity, 3);
    const Eigen::MatrixXd before = net.layers()[0].weights;
    AdamState adam = AdamState::for_network(net, 0.1);
    adam.step(net, net.zero_gradients());
    CHECK(net.layers()[0].weights == before);
}

TEST_CASE("adam under constant gradient moves against its sign at ~lr per step") {
    Mlp net = Mlp::create({1, 1}, Activation::Identity, Activation::Identity, 3);
    net.layers()[0].weights(0, 0) = 0.0;
    AdamState adam = AdamState::for_network(net, 0.05);
    MlpGradients g = net.zero_gradients();
    g.weights[0](0, 0) = 2.5;   // constant positive gradient
    double prev = 0.0;
    for (int i = 0; i < 50; ++i) {
        adam.step(net, g);
        const double now = net.layers()[0].weights(0, 0);
        CHECK(now < prev);                       // monotone, opposite sign
        if (i > 5) CHECK(std::abs(now - prev) == doctest::Approx(0.05).epsilon(0.05));
        prev = now;
    }
}

TEST_CASE("adam drives a quadratic bowl below 1e-6 in 2000 steps") {
    Mlp net = Mlp::create({1, 4}, Activation::Identity, Activation::Identity, 9);
    AdamState adam = AdamState::for_network(net, 0.03);
    double loss = 0.0;
    for (int it = 0; it < 2000; ++it) {
        loss = net.layers()[0].weights.squaredNorm() + net.layers()[0].biases.squaredNorm();
        if (loss < 1e-6) break;
        MlpGradients g = net.zero_gradients();
        g.weights[0] = 2.0 * net.layers()[0].weights;
        g.biases[0] = 2.0 * net.layers()[0].biases;
        adam.step(net, g);
    }
    CHECK(loss < 1e-6);
}

TEST_CASE("shape violations are rejected") {
    const Mlp net = Mlp::create({3, 2}, Activation::Identity, Activation::Identity, 1);
    CHECK_THROWS_AS(net.forward(Eigen::MatrixXd::Zero(2, 4)), std::invalid_argument);
    CHECK_THROWS_AS(Mlp::create({}, Activation::Identity, Activation::Identity, 0),
                    std::invalid_argument);
    Mlp::Trace trace;
    net.forward(Eigen::MatrixXd::Zero(2, 3), trace);
    CHECK_THROWS_AS(net.backward(trace, Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}
