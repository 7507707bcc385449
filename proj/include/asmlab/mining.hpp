#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asmlab/thresholds.hpp"

namespace asmlab {

enum class Subset : std::uint8_t { Clean = 0, Ambiguous = 1, Noisy = 2 };

const char* subset_name(Subset s);

// Disjoint index sets covering {0, ..., N-1} of the training set.
struct Partition {
    std::vector<std::size_t> clean;
    std::vector<std::size_t> ambiguous;
    std::vector<std::size_t> noisy;
    std::vector<Subset> assignment;  // per-sample tag, same order as preds
    int epoch = -1;

    std::size_t size() const { return assignment.size(); }
};

// max((p1 + p2) / 2)
double confidence(std::span<const double> p1, std::span<const double> p2);

// Noisy when s < t_noisy[y], else clean when s > t_clean[y], else
// ambiguous. The noisy check runs first so the split stays disjoint even
// for tables with t_noisy > t_clean (weak models early in training).
Subset classify_sample(double s, int y, const ThresholdTable& thresholds);

Partition partition(const EpochPredictions& preds, const ThresholdTable& thresholds);

// Quality of the mined noisy subset against injected-noise ground truth.
struct MiningQuality {
    double precision = 0.0;  // |noisy & mask| / |noisy|, 0 when noisy empty
    double recall = 0.0;     // |noisy & mask| / |mask|, 0 when mask empty
    // fraction of injected-noise samples landing in each subset
    double noise_in_clean = 0.0;
    double noise_in_ambiguous = 0.0;
    double noise_in_noisy = 0.0;
};

MiningQuality mining_quality(const Partition& part, std::span<const std::uint8_t> noise_mask);

}  // namespace asmlab
