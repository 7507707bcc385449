#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "asmlab/errors.hpp"
#include "asmlab/net.hpp"
#include "gradcheck.hpp"
#include "json.hpp"

using namespace asmlab;

namespace {

std::vector<double> random_input(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> x(dim);
    for (double& v : x) v = dist(rng);
    return x;
}

}  // namespace

TEST_CASE("zero net gives uniform softmax") {
    const DenseNet net = make_zero_net({3, 5, 4});
    const auto p = forward(net, std::vector<double>{0.3, -1.0, 2.5});
    REQUIRE(p.size() == 4);
    for (double v : p) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("saturated single-layer softmax") {
    DenseNet net = make_zero_net({2, 2});
    net.weights[0] = {1.0, 0.0, 0.0, 1.0};  // identity
    const auto p = forward(net, std::vector<double>{10.0, 0.0});
    CHECK(p[0] >= 0.999);
}

TEST_CASE("softmax outputs are normalized") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const DenseNet net = make_initialized_net({6, 16, 8, 3}, seed);
        const auto x = random_input(6, seed + 100);
        const auto p = forward(net, x);
        double sum = 0.0;
        for (double v : p) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) < 1e-9);
    }
}

TEST_CASE("forward rejects wrong input length") {
    const DenseNet net = make_zero_net({4, 3});
    CHECK_THROWS_AS(forward(net, std::vector<double>{1.0, 2.0}), ShapeError);
}

TEST_CASE("same seed gives the same net, different seeds differ") {
    const DenseNet a = make_initialized_net({4, 8, 3}, 42);
    const DenseNet b = make_initialized_net({4, 8, 3}, 42);
    const DenseNet c = make_initialized_net({4, 8, 3}, 43);
    CHECK(a.weights == b.weights);
    CHECK(a.weights != c.weights);
    for (const auto& layer : a.biases)
        for (double v : layer) CHECK(v == 0.0);
}

TEST_CASE("glorot bounds hold per layer") {
    const DenseNet net = make_initialized_net({10, 6, 2}, 7);
    const double bound0 = std::sqrt(6.0 / (10 + 6));
    for (double w : net.weights[0]) CHECK(std::abs(w) <= bound0);
    const double bound1 = std::sqrt(6.0 / (6 + 2));
    for (double w : net.weights[1]) CHECK(std::abs(w) <= bound1);
}

TEST_CASE("zero upstream gives zero gradients") {
    const DenseNet net = make_initialized_net({5, 7, 3}, 1);
    const auto trace = forward_trace(net, random_input(5, 2));
    const auto g = backward(net, trace, std::vector<double>(3, 0.0));
    for (const auto& layer : g.d_weights)
        for (double v : layer) CHECK(v == 0.0);
    for (const auto& layer : g.d_biases)
        for (double v : layer) CHECK(v == 0.0);
}

TEST_CASE("backward matches central finite differences") {
    // loss = c . p, a fixed linear functional of the softmax output
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        DenseNet net = make_initialized_net({5, 9, 6, 4}, seed);
        const auto x = random_input(5, seed + 50);
        std::mt19937_64 rng(seed + 500);
        std::uniform_real_distribution<double> dist(-1.5, 1.5);
        std::vector<double> c(4);
        for (double& v : c) v = dist(rng);

        const auto analytic = backward(net, forward_trace(net, x), c);
        const auto fd = gradcheck::finite_difference(net, [&] {
            const auto p = forward(net, x);
            double acc = 0.0;
            for (std::size_t k = 0; k < p.size(); ++k) acc += c[k] * p[k];
            return acc;
        });
        CHECK(gradcheck::max_rel_error(analytic, fd) < 1e-4);
    }
}

TEST_CASE("duplicate sample contributes exactly twice the gradient") {
    const DenseNet net = make_initialized_net({4, 6, 3}, 9);
    const auto x = random_input(4, 10);
    const std::vector<double> upstream = {0.3, -1.1, 0.4};
    const auto trace = forward_trace(net, x);
    const auto single = backward(net, trace, upstream);

    GradientBundle doubled = make_zero_gradients(net);
    add(doubled, backward(net, trace, upstream));
    add(doubled, backward(net, trace, upstream));
    for (std::size_t l = 0; l < single.d_weights.size(); ++l)
        for (std::size_t i = 0; i < single.d_weights[l].size(); ++i)
            CHECK(doubled.d_weights[l][i] == 2.0 * single.d_weights[l][i]);
}

TEST_CASE("adam: zero gradients and zero decay change nothing") {
    DenseNet net = make_initialized_net({3, 5, 2}, 3);
    const DenseNet before = net;
    AdamState state = make_adam_state(net);
    adam_step(net, state, make_zero_gradients(net), 0.01, 0.0);
    CHECK(net.weights == before.weights);
    CHECK(net.biases == before.biases);
    CHECK(state.step == 1);
}

TEST_CASE("adam: decay-only update shrinks parameters by 1 - lr*wd") {
    DenseNet net = make_initialized_net({3, 4, 2}, 5);
    const DenseNet before = net;
    AdamState state = make_adam_state(net);
    adam_step(net, state, make_zero_gradients(net), 0.01, 0.1);
    for (std::size_t l = 0; l < net.weights.size(); ++l)
        for (std::size_t i = 0; i < net.weights[l].size(); ++i)
            CHECK(net.weights[l][i] ==
                  doctest::Approx(before.weights[l][i] * (1.0 - 0.001)).epsilon(1e-14));
}

TEST_CASE("adam single step matches a hand-stepped oracle") {
    // independent scalar recomputation of one Adam update with decay
    DenseNet net = make_initialized_net({2, 3, 2}, 11);
    const DenseNet before = net;
    AdamState state = make_adam_state(net);
    GradientBundle g = make_zero_gradients(net);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& layer : g.d_weights)
        for (double& v : layer) v = dist(rng);
    for (auto& layer : g.d_biases)
        for (double& v : layer) v = dist(rng);

    const double lr = 0.005, wd = 1e-4, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    adam_step(net, state, g, lr, wd);

    auto oracle = [&](double p, double grad) {
        const double m = (1.0 - beta1) * grad;
        const double v = (1.0 - beta2) * grad * grad;
        const double m_hat = m / (1.0 - beta1);
        const double v_hat = v / (1.0 - beta2);
        return p - lr * (m_hat / (std::sqrt(v_hat) + eps) + wd * p);
    };
    for (std::size_t l = 0; l < net.weights.size(); ++l)
        for (std::size_t i = 0; i < net.weights[l].size(); ++i)
            CHECK(net.weights[l][i] ==
                  doctest::Approx(oracle(before.weights[l][i], g.d_weights[l][i]))
                      .epsilon(1e-12));
    // fresh state, constant gradient: |step| is lr up to epsilon effects
    CHECK(std::abs(std::abs(net.weights[0][0] - before.weights[0][0] * (1.0 - lr * wd)) - lr) <
          1e-5);
}

TEST_CASE("adam rejects non-finite gradients") {
    DenseNet net = make_initialized_net({2, 2}, 1);
    AdamState state = make_adam_state(net);
    GradientBundle g = make_zero_gradients(net);
    g.d_weights[0][1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(adam_step(net, state, g, 0.01, 0.0), NumericFault);
}

TEST_CASE("adam step counter increases by one per update") {
    DenseNet net = make_initialized_net({2, 2}, 1);
    AdamState state = make_adam_state(net);
    const GradientBundle g = make_zero_gradients(net);
    for (int t = 1; t <= 5; ++t) {
        adam_step(net, state, g, 0.01, 0.0);
        CHECK(state.step == t);
    }
}

TEST_CASE("checkpoint json round-trip is exact") {
    const DenseNet net = make_initialized_net({4, 7, 3}, 123);
    const std::string text = checkpoint_to_json(net, 123, 42);
    const Checkpoint ck = checkpoint_from_json(text);
    CHECK(ck.net.layer_dims == net.layer_dims);
    CHECK(ck.net.weights == net.weights);
    CHECK(ck.net.biases == net.biases);
    CHECK(ck.seed == 123);
    CHECK(ck.epoch == 42);
}

TEST_CASE("checkpoint parser rejects malformed input") {
    CHECK_THROWS_AS(checkpoint_from_json("not json"), ParseError);
    CHECK_THROWS_AS(checkpoint_from_json("{}"), ParseError);
    const DenseNet net = make_initialized_net({4, 3}, 1);
    auto j = nlohmann::json::parse(checkpoint_to_json(net, 1, 0));
    j["weights"][0].erase(0);  // break the shape
    CHECK_THROWS_AS(checkpoint_from_json(j.dump()), ParseError);
}
