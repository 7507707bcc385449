#include "asmlab/net.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "asmlab/errors.hpp"
#include "json.hpp"

namespace asmlab {

namespace {

void check_dims(const std::vector<int>& dims) {
    if (dims.size() < 2) throw ConfigError("layer_dims needs at least input and output sizes");
    for (int d : dims) {
        if (d <= 0) throw ConfigError("layer_dims entries must be positive");
    }
}

}  // namespace

std::size_t DenseNet::num_parameters() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
}

DenseNet make_zero_net(const std::vector<int>& layer_dims) {
    check_dims(layer_dims);
    DenseNet net;
    net.layer_dims = layer_dims;
    for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
        net.weights.emplace_back(static_cast<std::size_t>(layer_dims[l + 1]) * layer_dims[l], 0.0);
        net.biases.emplace_back(layer_dims[l + 1], 0.0);
    }
    return net;
}

DenseNet make_initialized_net(const std::vector<int>& layer_dims, std::uint64_t seed) {
    DenseNet net = make_zero_net(layer_dims);
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const int fan_in = layer_dims[l];
        const int fan_out = layer_dims[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (double& w : net.weights[l]) w = dist(rng);
        // biases stay zero
    }
    return net;
}

GradientBundle make_zero_gradients(const DenseNet& net) {
    GradientBundle g;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        g.d_weights.emplace_back(net.weights[l].size(), 0.0);
        g.d_biases.emplace_back(net.biases[l].size(), 0.0);
    }
    return g;
}

void add_scaled(GradientBundle& acc, const GradientBundle& g, double scale) {
    for (std::size_t l = 0; l < acc.d_weights.size(); ++l) {
        for (std::size_t i = 0; i < acc.d_weights[l].size(); ++i)
            acc.d_weights[l][i] += scale * g.d_weights[l][i];
        for (std::size_t i = 0; i < acc.d_biases[l].size(); ++i)
            acc.d_biases[l][i] += scale * g.d_biases[l][i];
    }
    acc.loss += scale * g.loss;
}

void add(GradientBundle& acc, const GradientBundle& g) {
    for (std::size_t l = 0; l < acc.d_weights.size(); ++l) {
        for (std::size_t i = 0; i < acc.d_weights[l].size(); ++i)
            acc.d_weights[l][i] += g.d_weights[l][i];
        for (std::size_t i = 0; i < acc.d_biases[l].size(); ++i)
            acc.d_biases[l][i] += g.d_biases[l][i];
    }
    acc.loss += g.loss;
}

bool all_finite(const GradientBundle& g) {
    for (const auto& layer : g.d_weights)
        for (double v : layer)
            if (!std::isfinite(v)) return false;
    for (const auto& layer : g.d_biases)
        for (double v : layer)
            if (!std::isfinite(v)) return false;
    return true;
}

namespace {

// z = W a + b
void affine(const std::vector<double>& w, const std::vector<double>& b,
            std::span<const double> a, std::vector<double>& z) {
    const std::size_t rows = b.size();
    const std::size_t cols = a.size();
    z.assign(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = b[r];
        const double* wr = w.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * a[c];
        z[r] = acc;
    }
}

void softmax_inplace(std::vector<double>& z) {
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& v : z) {
        v = std::exp(v - zmax);
        sum += v;
    }
    for (double& v : z) v /= sum;
}

}  // namespace

ForwardTrace forward_trace(const DenseNet& net, std::span<const double> x) {
    if (static_cast<int>(x.size()) != net.input_dim())
        throw ShapeError("forward: input length " + std::to_string(x.size()) +
                         " does not match layer_dims[0]=" + std::to_string(net.input_dim()));
    ForwardTrace trace;
    trace.activations.reserve(net.num_layers());
    trace.activations.emplace_back(x.begin(), x.end());

    std::vector<double> z;
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        affine(net.weights[l], net.biases[l], trace.activations.back(), z);
        if (l + 1 < net.num_layers()) {
            for (double& v : z) v = std::tanh(v);
            trace.activations.push_back(z);
        } else {
            softmax_inplace(z);
            trace.probs = z;
        }
    }
    return trace;
}

std::vector<double> forward(const DenseNet& net, std::span<const double> x) {
    return forward_trace(net, x).probs;
}

GradientBundle backward(const DenseNet& net, const ForwardTrace& trace,
                        std::span<const double> upstream) {
    if (static_cast<int>(upstream.size()) != net.num_classes())
        throw ShapeError("backward: upstream length does not match class count");

    GradientBundle g = make_zero_gradients(net);

    // dL/dz for the softmax output: p .* (u - u . p)
    const std::vector<double>& p = trace.probs;
    double dot = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) dot += upstream[k] * p[k];
    std::vector<double> dz(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) dz[k] = p[k] * (upstream[k] - dot);

    for (std::size_t l = net.num_layers(); l-- > 0;) {
        const std::vector<double>& a = trace.activations[l];
        const std::size_t rows = net.biases[l].size();
        const std::size_t cols = a.size();
        for (std::size_t r = 0; r < rows; ++r) {
            g.d_biases[l][r] = dz[r];
            double* gw = g.d_weights[l].data() + r * cols;
            for (std::size_t c = 0; c < cols; ++c) gw[c] = dz[r] * a[c];
        }
        if (l == 0) break;
        // da = W^T dz, then through tanh: dz_prev = da .* (1 - a^2)
        std::vector<double> da(cols, 0.0);
        for (std::size_t r = 0; r < rows; ++r) {
            const double* wr = net.weights[l].data() + r * cols;
            for (std::size_t c = 0; c < cols; ++c) da[c] += wr[c] * dz[r];
        }
        dz.assign(cols, 0.0);
        for (std::size_t c = 0; c < cols; ++c) dz[c] = da[c] * (1.0 - a[c] * a[c]);
    }
    return g;
}

AdamState make_adam_state(const DenseNet& net) {
    AdamState s;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        s.m_weights.emplace_back(net.weights[l].size(), 0.0);
        s.v_weights.emplace_back(net.weights[l].size(), 0.0);
        s.m_biases.emplace_back(net.biases[l].size(), 0.0);
        s.v_biases.emplace_back(net.biases[l].size(), 0.0);
    }
    return s;
}

namespace {

void adam_update(std::vector<double>& p, std::vector<double>& m, std::vector<double>& v,
                 const std::vector<double>& g, double lr, double weight_decay,
                 double beta1, double beta2, double eps, double bc1, double bc2) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        const double m_hat = m[i] / bc1;
        const double v_hat = v[i] / bc2;
        p[i] -= lr * (m_hat / (std::sqrt(v_hat) + eps) + weight_decay * p[i]);
    }
}

}  // namespace

void adam_step(DenseNet& net, AdamState& state, const GradientBundle& grads,
               double lr, double weight_decay) {
    if (grads.d_weights.size() != net.weights.size())
        throw ShapeError("adam_step: gradient layer count mismatch");
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        if (grads.d_weights[l].size() != net.weights[l].size() ||
            grads.d_biases[l].size() != net.biases[l].size())
            throw ShapeError("adam_step: gradient shape mismatch at layer " + std::to_string(l));
    }
    if (lr < 0.0) throw ConfigError("adam_step: lr must be non-negative");
    if (!all_finite(grads)) throw NumericFault("adam_step: non-finite gradient entries");

    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        adam_update(net.weights[l], state.m_weights[l], state.v_weights[l], grads.d_weights[l],
                    lr, weight_decay, state.beta1, state.beta2, state.epsilon, bc1, bc2);
        adam_update(net.biases[l], state.m_biases[l], state.v_biases[l], grads.d_biases[l],
                    lr, weight_decay, state.beta1, state.beta2, state.epsilon, bc1, bc2);
    }
}

std::string checkpoint_to_json(const DenseNet& net, std::uint64_t seed, int epoch) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["layer_dims"] = net.layer_dims;
    j["weights"] = net.weights;
    j["biases"] = net.biases;
    j["seed"] = seed;
    j["epoch"] = epoch;
    return j.dump();
}

Checkpoint checkpoint_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("checkpoint: invalid JSON: ") + e.what());
    }
    try {
        if (j.at("format_version").get<int>() != 1)
            throw ParseError("checkpoint: unsupported format_version");
        Checkpoint ck;
        ck.net.layer_dims = j.at("layer_dims").get<std::vector<int>>();
        ck.net.weights = j.at("weights").get<std::vector<std::vector<double>>>();
        ck.net.biases = j.at("biases").get<std::vector<std::vector<double>>>();
        ck.seed = j.at("seed").get<std::uint64_t>();
        ck.epoch = j.at("epoch").get<int>();
        check_dims(ck.net.layer_dims);
        if (ck.net.weights.size() + 1 != ck.net.layer_dims.size() ||
            ck.net.biases.size() + 1 != ck.net.layer_dims.size())
            throw ParseError("checkpoint: layer count mismatch");
        for (std::size_t l = 0; l + 1 < ck.net.layer_dims.size(); ++l) {
            const auto rows = static_cast<std::size_t>(ck.net.layer_dims[l + 1]);
            const auto cols = static_cast<std::size_t>(ck.net.layer_dims[l]);
            if (ck.net.weights[l].size() != rows * cols || ck.net.biases[l].size() != rows)
                throw ParseError("checkpoint: parameter shape mismatch at layer " +
                                 std::to_string(l));
        }
        return ck;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("checkpoint: missing or mistyped field: ") + e.what());
    }
}

}  // namespace asmlab
