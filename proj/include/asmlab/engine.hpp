#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asmlab/dataset.hpp"
#include "asmlab/losses.hpp"
#include "asmlab/mining.hpp"
#include "asmlab/net.hpp"
#include "asmlab/parallel.hpp"
#include "asmlab/thresholds.hpp"

namespace asmlab {

// Two identically shaped classifiers with independent initializations and
// optimizer states.
struct DualNet {
    DenseNet net1, net2;
    AdamState adam1, adam2;
};

DualNet make_dual_net(const std::vector<int>& layer_dims, std::uint64_t seed1,
                      std::uint64_t seed2);

// Evaluation pass over ds rows (un-augmented): averaged softmax of the two
// networks plus per-sample confidence, argmax and given label. Row slots
// are written independently, so the result does not depend on thread count.
EpochPredictions predict(const DenseNet& net1, const DenseNet& net2, const NoisyDataset& ds,
                         std::span<const std::size_t> rows, Exec exec);

struct AccuracyRecord {
    double net1 = 0.0;
    double net2 = 0.0;
    double ensemble = 0.0;  // argmax of averaged probabilities, ties -> lowest index
    std::size_t count = 0;
};

// Accuracy against true labels over the given rows.
AccuracyRecord evaluate_accuracy(const DenseNet& net1, const DenseNet& net2,
                                 const NoisyDataset& ds, std::span<const std::size_t> rows,
                                 Exec exec);

// Per-batch objective context. aug_seed feeds per-sample RNG streams
// (mixed with the dataset row id) so augmentation draws are independent of
// thread scheduling and batch composition.
struct BatchContext {
    double lambda = 0.0;
    LossWeights weights;
    AugmentationPolicy aug;
    bool stop_weak_gradient = false;
    std::uint64_t aug_seed = 0;
};

struct BatchStats {
    double sup = 0.0;  // mean over the batch's clean members, 0 when none
    double mut = 0.0;  // mean over ambiguous members
    double usc = 0.0;  // mean over noisy members
    double total = 0.0;
    std::size_t n_clean = 0, n_ambiguous = 0, n_noisy = 0;
};

// Gradients of the tri-term batch objective
//   sup_mean + omega * mut_mean + gamma * usc_mean
// accumulated into g1/g2 (which are reset first). Per-sample gradients are
// computed in slot order (parallel or serial) and reduced serially in batch
// order, so results are bit-identical across thread counts. Terms with a
// zero weight or no members contribute no gradient work at all.
BatchStats accumulate_batch(const DenseNet& net1, const DenseNet& net2, const NoisyDataset& ds,
                            std::span<const std::size_t> batch_rows,
                            std::span<const Subset> batch_tags, const BatchContext& ctx,
                            GradientBundle& g1, GradientBundle& g2, Exec exec);

}  // namespace asmlab
