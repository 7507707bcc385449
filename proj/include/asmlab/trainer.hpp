#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "asmlab/engine.hpp"

namespace asmlab {

struct TrainConfig {
    int epochs = 100;
    int warmup_epochs = 10;
    int batch_size = 128;
    double lr = 0.001;
    double lr_gamma = 0.9;  // per-epoch exponential decay
    double weight_decay = 1e-4;
    RampSchedule ramp;       // lambda_max 0.9, beta 0.65, e_r 90
    LossWeights weights;     // omega 1.0, gamma 1.0
    std::uint64_t seed_net1 = 1;
    std::uint64_t seed_net2 = 2;
    std::uint64_t seed_data_order = 3;
    bool stop_weak_gradient = false;
    std::vector<int> hidden_dims = {64, 32};
    AugmentationPolicy aug;
    int checkpoint_every = 0;  // epochs between checkpoints, 0 = final only
    Exec exec = Exec::Parallel;

    bool is_baseline() const { return warmup_epochs == epochs; }
};

void validate(const TrainConfig& cfg);

struct EpochReport {
    int epoch = 0;
    bool warmup = false;
    double lr = 0.0;
    double lambda = 0.0;
    AccuracyRecord test_accuracy;
    std::size_t n_clean = 0, n_ambiguous = 0, n_noisy = 0;
    double mean_sup = 0.0, mean_mut = 0.0, mean_usc = 0.0, mean_total = 0.0;
    std::vector<double> t_clean, t_noisy;
    bool has_mining = false;
    MiningQuality mining;
};

// One JSON object per epoch; concatenated these form the metrics log.
std::string epoch_report_to_json(const EpochReport& report);

struct TrainHooks {
    std::function<void(const EpochReport&)> on_epoch;
    std::function<void(int epoch, const DualNet&)> on_checkpoint;
};

struct TrainResult {
    std::vector<EpochReport> reports;
    DualNet nets;
    ThresholdTable thresholds;
    std::optional<Partition> final_partition;
    double last5_mean_accuracy = 0.0;  // ensemble accuracy, mean of last 5 epochs
    std::string mode;                  // "asm" or "baseline"
};

// warmup_epochs of plain co-trained supervised epochs, then ASM epochs:
// per epoch an evaluation pass over the training set, threshold update,
// three-way mining, and tri-regularized minibatch updates of both nets.
TrainResult train(const NoisyDataset& ds, const TrainConfig& cfg, const TrainHooks& hooks = {});

// Building blocks shared with tests and the benchmark.
std::vector<int> network_dims(const NoisyDataset& ds, const TrainConfig& cfg);
std::vector<std::vector<std::size_t>> make_batches(const std::vector<std::size_t>& order,
                                                   int batch_size);
std::uint64_t epoch_aug_seed(const TrainConfig& cfg, int epoch);

// Seeds for one compare repetition, derived from a single user seed.
struct DerivedSeeds {
    std::uint64_t net1, net2, data_order;
};
DerivedSeeds derive_seeds(std::uint64_t seed);

struct CompareSeedRecord {
    std::uint64_t seed = 0;
    DerivedSeeds seeds{};
    double baseline_accuracy = 0.0;  // last-5 mean, ensemble
    double asm_accuracy = 0.0;
    double gap = 0.0;  // asm - baseline
    bool has_mining = false;
    MiningQuality final_mining;
};

struct CompareResult {
    std::vector<CompareSeedRecord> per_seed;
    double mean_baseline = 0.0, std_baseline = 0.0;
    double mean_asm = 0.0, std_asm = 0.0;
    double mean_gap = 0.0, std_gap = 0.0;
    int positive_gap_seeds = 0;
};

// Baseline (all-warm-up co-trained CE) vs ASM on the same dataset and
// schedule, repeated over a seed list. Standard deviations are sample
// standard deviations.
CompareResult run_compare(const NoisyDataset& ds, const TrainConfig& cfg,
                          const std::vector<std::uint64_t>& seeds,
                          const std::function<void(const CompareSeedRecord&)>& on_seed = {});

}  // namespace asmlab
