#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace asmlab {

// Dense feed-forward classifier: tanh on hidden layers, softmax on the
// output. Weights are row-major, weights[l] has shape dims[l+1] x dims[l].
struct DenseNet {
    std::vector<int> layer_dims;
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    int input_dim() const { return layer_dims.front(); }
    int num_classes() const { return layer_dims.back(); }
    std::size_t num_layers() const { return weights.size(); }
    std::size_t num_parameters() const;
};

// Zero-initialized net with the given dims. layer_dims must have length >= 2.
DenseNet make_zero_net(const std::vector<int>& layer_dims);

// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases.
// Independent seed per network so two nets give two views of the data.
DenseNet make_initialized_net(const std::vector<int>& layer_dims, std::uint64_t seed);

// Per-parameter gradients shaped like the owning net, plus the scalar loss
// they came from.
struct GradientBundle {
    std::vector<std::vector<double>> d_weights;
    std::vector<std::vector<double>> d_biases;
    double loss = 0.0;
};

GradientBundle make_zero_gradients(const DenseNet& net);

// In-place ops used by batch accumulation. Shapes must match.
void add_scaled(GradientBundle& acc, const GradientBundle& g, double scale);
void add(GradientBundle& acc, const GradientBundle& g);
bool all_finite(const GradientBundle& g);

// Softmax probabilities for one input. Throws ShapeError on a length
// mismatch. Output sums to 1 within 1e-9.
std::vector<double> forward(const DenseNet& net, std::span<const double> x);

// Forward pass with cached activations for the backward pass.
// activations[0] is the input; activations[l] for l >= 1 holds the tanh
// outputs of hidden layer l; probs holds the softmax output.
struct ForwardTrace {
    std::vector<std::vector<double>> activations;
    std::vector<double> probs;
};

ForwardTrace forward_trace(const DenseNet& net, std::span<const double> x);

// Reverse-mode gradients of a scalar loss given dL/dp (upstream gradient
// w.r.t. the softmax output). Exact for the cached forward pass.
GradientBundle backward(const DenseNet& net, const ForwardTrace& trace,
                        std::span<const double> upstream);

// Adam with decoupled weight decay (parameter shrinkage by lr*weight_decay).
struct AdamState {
    std::vector<std::vector<double>> m_weights, v_weights;
    std::vector<std::vector<double>> m_biases, v_biases;
    std::int64_t step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

AdamState make_adam_state(const DenseNet& net);

// One Adam update. Throws NumericFault on non-finite gradient entries.
void adam_step(DenseNet& net, AdamState& state, const GradientBundle& grads,
               double lr, double weight_decay);

// Versioned JSON checkpoint: layer_dims, flattened weights/biases per
// layer, the RNG seed the net was created from, and an epoch index.
std::string checkpoint_to_json(const DenseNet& net, std::uint64_t seed, int epoch);
struct Checkpoint {
    DenseNet net;
    std::uint64_t seed = 0;
    int epoch = 0;
};
Checkpoint checkpoint_from_json(const std::string& text);

}  // namespace asmlab
