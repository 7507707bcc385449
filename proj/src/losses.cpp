#include "asmlab/losses.hpp"

#include <cmath>
#include <string>

#include "asmlab/errors.hpp"

namespace asmlab {

namespace {

void check_same_size(std::span<const double> a, std::span<const double> b, const char* who) {
    if (a.size() != b.size())
        throw ShapeError(std::string(who) + ": probability vectors differ in length");
}

double clamped(double p) { return p < kProbFloor ? kProbFloor : p; }

}  // namespace

double cross_entropy(std::span<const double> p, int y) {
    if (y < 0 || y >= static_cast<int>(p.size()))
        throw LabelError("cross_entropy: label " + std::to_string(y) + " out of range for K=" +
                         std::to_string(p.size()));
    return -std::log(clamped(p[static_cast<std::size_t>(y)]));
}

std::vector<double> cross_entropy_grad(std::span<const double> p, int y) {
    if (y < 0 || y >= static_cast<int>(p.size()))
        throw LabelError("cross_entropy_grad: label out of range");
    std::vector<double> g(p.size(), 0.0);
    const double py = p[static_cast<std::size_t>(y)];
    if (py > kProbFloor) g[static_cast<std::size_t>(y)] = -1.0 / py;
    return g;
}

double supervised_loss(std::span<const double> p1, std::span<const double> p2, int y) {
    check_same_size(p1, p2, "supervised_loss");
    return cross_entropy(p1, y) + cross_entropy(p2, y);
}

double symmetric_kl(std::span<const double> p1, std::span<const double> p2) {
    check_same_size(p1, p2, "symmetric_kl");
    double acc = 0.0;
    for (std::size_t k = 0; k < p1.size(); ++k) {
        const double log_ratio = std::log(clamped(p1[k])) - std::log(clamped(p2[k]));
        acc += (p1[k] - p2[k]) * log_ratio;
    }
    return acc;
}

void symmetric_kl_grad(std::span<const double> p1, std::span<const double> p2,
                       std::vector<double>& d_p1, std::vector<double>& d_p2) {
    check_same_size(p1, p2, "symmetric_kl_grad");
    d_p1.assign(p1.size(), 0.0);
    d_p2.assign(p2.size(), 0.0);
    for (std::size_t k = 0; k < p1.size(); ++k) {
        const double log_ratio = std::log(clamped(p1[k])) - std::log(clamped(p2[k]));
        d_p1[k] = log_ratio;
        d_p2[k] = -log_ratio;
        if (p1[k] > kProbFloor) d_p1[k] += (p1[k] - p2[k]) / p1[k];
        if (p2[k] > kProbFloor) d_p2[k] -= (p1[k] - p2[k]) / p2[k];
    }
}

double ramp_lambda(int epoch, const RampSchedule& sched) {
    if (epoch >= sched.e_r) return sched.lambda_max;
    const double t = 1.0 - static_cast<double>(epoch) / sched.e_r;
    return sched.lambda_max * std::exp(-sched.beta * t * t);
}

double mutual_loss(std::span<const double> p1, std::span<const double> p2, int y, double lambda) {
    return (1.0 - lambda) * supervised_loss(p1, p2, y) + lambda * symmetric_kl(p1, p2);
}

double mean_squared_error(std::span<const double> a, std::span<const double> b) {
    check_same_size(a, b, "mean_squared_error");
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

double consistency_loss(std::span<const double> pw1, std::span<const double> ps1,
                        std::span<const double> pw2, std::span<const double> ps2) {
    return mean_squared_error(pw1, ps1) + mean_squared_error(pw2, ps2);
}

double total_loss(double sup, double mut, double usc, const LossWeights& w) {
    const double total = sup + w.omega * mut + w.gamma * usc;
    if (!std::isfinite(total))
        throw NumericFault("total_loss: non-finite loss component");
    return total;
}

}  // namespace asmlab
