#pragma once

#include <span>
#include <vector>

namespace asmlab {

// Floor applied to probabilities inside every log. Keeps losses finite
// without visibly perturbing values at this scale.
inline constexpr double kProbFloor = 1e-12;

// lambda(e) = lambda_max * exp(-beta * (1 - e/e_r)^2) for e < e_r,
// clamped at lambda_max for e >= e_r.
struct RampSchedule {
    double lambda_max = 0.9;
    double beta = 0.65;
    int e_r = 90;
};

struct LossWeights {
    double omega = 1.0;
    double gamma = 1.0;
};

// -log p[y]. Throws LabelError when y is out of range.
double cross_entropy(std::span<const double> p, int y);
// d/dp of the clamped cross-entropy; zero where the floor is active.
std::vector<double> cross_entropy_grad(std::span<const double> p, int y);

// Classification loss from both networks: CE(p1,y) + CE(p2,y).
double supervised_loss(std::span<const double> p1, std::span<const double> p2, int y);

// KL(p1||p2) + KL(p2||p1) with the floor inside every log.
double symmetric_kl(std::span<const double> p1, std::span<const double> p2);
void symmetric_kl_grad(std::span<const double> p1, std::span<const double> p2,
                       std::vector<double>& d_p1, std::vector<double>& d_p2);

double ramp_lambda(int epoch, const RampSchedule& sched);

// (1-lambda) * supervised_loss + lambda * symmetric_kl.
double mutual_loss(std::span<const double> p1, std::span<const double> p2, int y, double lambda);

// Mean of squared componentwise differences.
double mean_squared_error(std::span<const double> a, std::span<const double> b);

// MSE(pw1, ps1) + MSE(pw2, ps2) over weak/strong prediction pairs.
double consistency_loss(std::span<const double> pw1, std::span<const double> ps1,
                        std::span<const double> pw2, std::span<const double> ps2);

// sup + omega * mut + gamma * usc. Throws NumericFault on non-finite input.
double total_loss(double sup, double mut, double usc, const LossWeights& w);

}  // namespace asmlab
