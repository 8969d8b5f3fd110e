#include "nnspod/mlp.hpp"
#include "nnspod/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace nnspod {

Activation activation_from_name(const std::string& name) {
    if (name == "softplus") return Activation::Softplus;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "leaky_relu") return Activation::LeakyRelu;
    if (name == "identity") return Activation::Identity;
    throw std::invalid_argument("unknown activation: " + name);
}

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::Softplus: return "softplus";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::LeakyRelu: return "leaky_relu";
        case Activation::Identity: return "identity";
    }
    return "identity";
}

namespace {

constexpr double kLeakySlope = 0.01;

double softplus(double z) {
    // max(z,0) + log1p(exp(-|z|)) stays finite over the whole double range.
    return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace

Eigen::ArrayXXd apply_activation(Activation a, const Eigen::ArrayXXd& z) {
    switch (a) {
        case Activation::Softplus: return z.unaryExpr([](double v) { return softplus(v); });
        case Activation::Sigmoid: return z.unaryExpr([](double v) { return sigmoid(v); });
        case Activation::LeakyRelu:
            return z.unaryExpr([](double v) { return v >= 0.0 ? v : kLeakySlope * v; });
        case Activation::Identity: return z;
    }
    return z;
}

Eigen::ArrayXXd activation_derivative(Activation a, const Eigen::ArrayXXd& z) {
    switch (a) {
        case Activation::Softplus: return z.unaryExpr([](double v) { return sigmoid(v); });
        case Activation::Sigmoid:
            return z.unaryExpr([](double v) {
                const double s = sigmoid(v);
                return s * (1.0 - s);
            });
        case Activation::LeakyRelu:
            return z.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : kLeakySlope; });
        case Activation::Identity: return Eigen::ArrayXXd::Ones(z.rows(), z.cols());
    }
    return Eigen::ArrayXXd::Ones(z.rows(), z.cols());
}

Mlp Mlp::create(const std::vector<int>& dims, Activation hidden, Activation output,
                unsigned long long seed) {
    if (dims.size() < 2) throw std::invalid_argument("Mlp: need at least input and output dims");
    for (int d : dims)
        if (d < 1) throw std::invalid_argument("Mlp: layer dims must be positive");
    Mlp net;
    Rng rng(seed);
    for (size_t l = 0; l + 1 < dims.size(); ++l) {
        MlpLayer layer;
        const int in = dims[l], out = dims[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        layer.weights.resize(out, in);
        layer.biases.resize(out);
        for (int r = 0; r < out; ++r)
            for (int c = 0; c < in; ++c) layer.weights(r, c) = rng.uniform(-bound, bound);
        for (int r = 0; r < out; ++r) layer.biases[r] = rng.uniform(-bound, bound);
        layer.activation = (l + 2 == dims.size()) ? output : hidden;
        net.layers_.push_back(std::move(layer));
    }
    return net;
}

int Mlp::input_dim() const {
    return layers_.empty() ? 0 : static_cast<int>(layers_.front().weights.cols());
}

int Mlp::output_dim() const {
    return layers_.empty() ? 0 : static_cast<int>(layers_.back().weights.rows());
}

long Mlp::parameter_count() const {
    long n = 0;
    for (const auto& l : layers_) n += l.weights.size() + l.biases.size();
    return n;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
    if (x.cols() != input_dim()) throw std::invalid_argument("Mlp: input width mismatch");
    Eigen::MatrixXd a = x;
    for (const auto& l : layers_) {
        Eigen::MatrixXd z = a * l.weights.transpose();
        z.rowwise() += l.biases.transpose();
        a = apply_activation(l.activation, z.array()).matrix();
    }
    return a;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Trace& trace) const {
    if (x.cols() != input_dim()) throw std::invalid_argument("Mlp: input width mismatch");
    trace.pre.clear();
    trace.post.clear();
    trace.post.push_back(x);
    for (const auto& l : layers_) {
        Eigen::MatrixXd z = trace.post.back() * l.weights.transpose();
        z.rowwise() += l.biases.transpose();
        trace.pre.push_back(z);
        trace.post.push_back(apply_activation(l.activation, z.array()).matrix());
    }
    return trace.post.back();
}

MlpGradients Mlp::backward(const Trace& trace, const Eigen::MatrixXd& upstream) const {
    if (trace.pre.size() != layers_.size())
        throw std::invalid_argument("Mlp: trace does not match network");
    if (upstream.rows() != trace.post.back().rows() || upstream.cols() != output_dim())
        throw std::invalid_argument("Mlp: upstream gradient shape mismatch");

    MlpGradients grads;
    grads.weights.resize(layers_.size());
    grads.biases.resize(layers_.size());
    Eigen::MatrixXd delta = upstream;
    for (long l = static_cast<long>(layers_.size()) - 1; l >= 0; --l) {
        const auto& layer = layers_[static_cast<size_t>(l)];
        delta = (delta.array() * activation_derivative(layer.activation, trace.pre[static_cast<size_t>(l)].array())).matrix();
        grads.weights[static_cast<size_t>(l)] = delta.transpose() * trace.post[static_cast<size_t>(l)];
        grads.biases[static_cast<size_t>(l)] = delta.colwise().sum().transpose();
        delta = delta * layer.weights;
    }
    grads.input = delta;
    return grads;
}

MlpGradients Mlp::zero_gradients() const {
    MlpGradients g;
    for (const auto& l : layers_) {
        g.weights.emplace_back(Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()));
        g.biases.emplace_back(Eigen::VectorXd::Zero(l.biases.size()));
    }
    return g;
}

AdamState AdamState::for_network(const Mlp& net, double lr_) {
    AdamState s;
    s.lr = lr_;
    for (const auto& l : net.layers()) {
        s.m_w.emplace_back(Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()));
        s.v_w.emplace_back(Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()));
        s.m_b.emplace_back(Eigen::VectorXd::Zero(l.biases.size()));
        s.v_b.emplace_back(Eigen::VectorXd::Zero(l.biases.size()));
    }
    return s;
}

void AdamState::step(Mlp& net, const MlpGradients& grads) {
    if (grads.weights.size() != net.layers().size())
        throw std::invalid_argument("AdamState: gradient/network layer mismatch");
    ++step_count;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step_count));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step_count));
    for (size_t l = 0; l < net.layers().size(); ++l) {
        auto& layer = net.layers()[l];
        if (grads.weights[l].rows() != layer.weights.rows() ||
            grads.weights[l].cols() != layer.weights.cols())
            throw std::invalid_argument("AdamState: gradient shape mismatch");
        m_w[l] = beta1 * m_w[l] + (1.0 - beta1) * grads.weights[l];
        v_w[l] = beta2 * v_w[l].array() + (1.0 - beta2) * grads.weights[l].array().square();
        layer.weights.array() -=
            lr * (m_w[l].array() / c1) / ((v_w[l].array() / c2).sqrt() + epsilon);
        m_b[l] = beta1 * m_b[l] + (1.0 - beta1) * grads.biases[l];
        v_b[l] = beta2 * v_b[l].array() + (1.0 - beta2) * grads.biases[l].array().square();
        layer.biases.array() -=
            lr * (m_b[l].array() / c1) / ((v_b[l].array() / c2).sqrt() + epsilon);
    }
}

} // namespace nnspod
