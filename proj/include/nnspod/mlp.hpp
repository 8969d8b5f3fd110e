#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace nnspod {

enum class Activation { Softplus, Sigmoid, LeakyRelu, Identity };

Activation activation_from_name(const std::string& name);
std::string activation_name(Activation a);

Eigen::ArrayXXd apply_activation(Activation a, const Eigen::ArrayXXd& z);
Eigen::ArrayXXd activation_derivative(Activation a, const Eigen::ArrayXXd& z);

struct MlpLayer {
    Eigen::MatrixXd weights;   // out x in
    Eigen::VectorXd biases;    // out
    Activation activation = Activation::Identity;
};

struct MlpGradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
    Eigen::MatrixXd input;     // dL/dX, same shape as the forward input
};

/// Dense feed-forward network over row-batches: forward maps an N x in batch
/// to N x out. Backpropagation also yields gradients w.r.t. the inputs, which
/// the composite shift loss differentiates through.
class Mlp {
public:
    Mlp() = default;

    /// dims = {in, hidden..., out}; hidden layers use `hidden`, output layer
    /// uses `output` (Identity for regression heads). Weights and biases are
    /// drawn uniformly from +-1/sqrt(fan_in), reproducibly from `seed`.
    static Mlp create(const std::vector<int>& dims, Activation hidden, Activation output,
                      unsigned long long seed);

    int input_dim() const;
    int output_dim() const;
    long parameter_count() const;
    const std::vector<MlpLayer>& layers() const { return layers_; }
    std::vector<MlpLayer>& layers() { return layers_; }

    Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;

    struct Trace {
        std::vector<Eigen::MatrixXd> pre;   // pre-activation per layer
        std::vector<Eigen::MatrixXd> post;  // post-activation, post[0] = input
    };
    Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Trace& trace) const;

    /// upstream = dL/d(output), N x out, for the batch recorded in `trace`.
    MlpGradients backward(const Trace& trace, const Eigen::MatrixXd& upstream) const;

    MlpGradients zero_gradients() const;

private:
    std::vector<MlpLayer> layers_;
};

struct AdamState {
    std::vector<Eigen::MatrixXd> m_w, v_w;
    std::vector<Eigen::VectorXd> m_b, v_b;
    long step_count = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState for_network(const Mlp& net, double lr);
    void step(Mlp& net, const MlpGradients& grads);
};

struct TrainConfig {
    double lr = 1e-3;
    double loss_threshold = 1e-6;
    long max_epochs = 20000;
    unsigned long long seed = 0;
};

struct TrainReport {
    double final_loss = 0.0;
    long epochs = 0;
    bool threshold_met = false;
};

} // namespace nnspod
