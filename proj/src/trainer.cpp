#include "asmlab/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "asmlab/errors.hpp"
#include "json.hpp"

namespace asmlab {

void validate(const TrainConfig& cfg) {
    if (cfg.epochs < 1) throw ConfigError("train config: epochs must be >= 1");
    if (cfg.warmup_epochs < 0 || cfg.warmup_epochs > cfg.epochs)
        throw ConfigError("train config: warmup_epochs must lie in [0, epochs]");
    if (cfg.batch_size < 1) throw ConfigError("train config: batch_size must be >= 1");
    if (cfg.lr < 0.0 || !std::isfinite(cfg.lr))
        throw ConfigError("train config: lr must be non-negative");
    if (!(cfg.lr_gamma > 0.0) || cfg.lr_gamma > 1.0)
        throw ConfigError("train config: lr_gamma must lie in (0, 1]");
    if (cfg.weight_decay < 0.0) throw ConfigError("train config: weight_decay must be >= 0");
    if (cfg.ramp.lambda_max < 0.0 || cfg.ramp.lambda_max > 1.0)
        throw ConfigError("train config: lambda_max must lie in [0, 1]");
    if (!(cfg.ramp.beta > 0.0)) throw ConfigError("train config: beta must be positive");
    if (cfg.ramp.e_r < 1 || cfg.ramp.e_r > cfg.epochs)
        throw ConfigError("train config: e_r must lie in [1, epochs]");
    if (cfg.weights.omega < 0.0 || cfg.weights.gamma < 0.0 ||
        !std::isfinite(cfg.weights.omega) || !std::isfinite(cfg.weights.gamma))
        throw ConfigError("train config: omega and gamma must be finite and non-negative");
    for (int d : cfg.hidden_dims)
        if (d < 1) throw ConfigError("train config: hidden dims must be positive");
    validate_policy(cfg.aug);
    if (cfg.checkpoint_every < 0) throw ConfigError("train config: checkpoint_every must be >= 0");
}

std::vector<int> network_dims(const NoisyDataset& ds, const TrainConfig& cfg) {
    std::vector<int> dims;
    dims.push_back(ds.dim);
    dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
    dims.push_back(ds.num_classes);
    return dims;
}

std::vector<std::vector<std::size_t>> make_batches(const std::vector<std::size_t>& order,
                                                   int batch_size) {
    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(batch_size)) {
        const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(batch_size));
        batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                             order.begin() + static_cast<std::ptrdiff_t>(stop));
    }
    return batches;
}

std::uint64_t epoch_aug_seed(const TrainConfig& cfg, int epoch) {
    return mix_seed(mix_seed(cfg.seed_data_order, 0x617567ULL),
                    static_cast<std::uint64_t>(epoch));
}

std::string epoch_report_to_json(const EpochReport& r) {
    nlohmann::json j;
    j["epoch"] = r.epoch;
    j["phase"] = r.warmup ? "warmup" : "asm";
    j["lr"] = r.lr;
    j["lambda"] = r.lambda;
    j["test_accuracy"] = {{"net1", r.test_accuracy.net1},
                          {"net2", r.test_accuracy.net2},
                          {"ensemble", r.test_accuracy.ensemble}};
    j["subset_sizes"] = {
        {"clean", r.n_clean}, {"ambiguous", r.n_ambiguous}, {"noisy", r.n_noisy}};
    j["mean_losses"] = {
        {"sup", r.mean_sup}, {"mut", r.mean_mut}, {"usc", r.mean_usc}, {"total", r.mean_total}};
    j["thresholds"] = {{"t_clean", r.t_clean}, {"t_noisy", r.t_noisy}};
    if (r.has_mining) {
        j["mining"] = {{"precision", r.mining.precision},
                       {"recall", r.mining.recall},
                       {"noise_in_clean", r.mining.noise_in_clean},
                       {"noise_in_ambiguous", r.mining.noise_in_ambiguous},
                       {"noise_in_noisy", r.mining.noise_in_noisy}};
    }
    return j.dump();
}

TrainResult train(const NoisyDataset& ds, const TrainConfig& cfg, const TrainHooks& hooks) {
    validate(cfg);
    const std::vector<std::size_t> train_rows = ds.train_indices();
    const std::vector<std::size_t> test_rows = ds.test_indices();
    if (train_rows.empty()) throw ConfigError("train: dataset has no training rows");
    if (test_rows.empty()) throw ConfigError("train: dataset has no test rows");

    const bool mask_available =
        std::any_of(train_rows.begin(), train_rows.end(),
                    [&](std::size_t row) { return ds.noise_mask[row] != 0; });
    std::vector<std::uint8_t> train_mask(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i)
        train_mask[i] = ds.noise_mask[train_rows[i]];

    TrainResult result;
    result.nets = make_dual_net(network_dims(ds, cfg), cfg.seed_net1, cfg.seed_net2);
    result.thresholds = init_thresholds(ds.num_classes);
    result.mode = cfg.is_baseline() ? "baseline" : "asm";

    std::mt19937_64 order_rng(cfg.seed_data_order);
    std::vector<std::size_t> order(train_rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const bool warmup = epoch < cfg.warmup_epochs;
        const double lr = cfg.lr * std::pow(cfg.lr_gamma, static_cast<double>(epoch));

        EpochReport report;
        report.epoch = epoch;
        report.warmup = warmup;
        report.lr = lr;

        std::vector<Subset> tags(train_rows.size(), Subset::Clean);
        if (!warmup) {
            // evaluation pass on the un-augmented training set, then
            // thresholds, then mining; all on the same snapshot
            const EpochPredictions preds =
                predict(result.nets.net1, result.nets.net2, ds, train_rows, cfg.exec);
            result.thresholds =
                compute_thresholds(preds, ds.num_classes, result.thresholds, epoch);
            Partition part = partition(preds, result.thresholds);
            report.n_clean = part.clean.size();
            report.n_ambiguous = part.ambiguous.size();
            report.n_noisy = part.noisy.size();
            if (part.clean.size() + part.ambiguous.size() + part.noisy.size() !=
                train_rows.size())
                throw NumericFault("train: partition does not cover the training set");
            report.lambda = ramp_lambda(epoch, cfg.ramp);
            tags = part.assignment;
            if (mask_available) {
                report.has_mining = true;
                report.mining = mining_quality(part, train_mask);
            }
            result.final_partition = std::move(part);
        } else {
            report.n_clean = train_rows.size();
        }
        report.t_clean = result.thresholds.t_clean;
        report.t_noisy = result.thresholds.t_noisy;

        std::shuffle(order.begin(), order.end(), order_rng);
        const auto batches = make_batches(order, cfg.batch_size);

        BatchContext ctx;
        ctx.lambda = report.lambda;
        ctx.weights = warmup ? LossWeights{0.0, 0.0} : cfg.weights;
        ctx.aug = cfg.aug;
        ctx.stop_weak_gradient = cfg.stop_weak_gradient;
        ctx.aug_seed = epoch_aug_seed(cfg, epoch);

        double sum_sup = 0.0, sum_mut = 0.0, sum_usc = 0.0, sum_total = 0.0;
        GradientBundle g1, g2;
        std::vector<std::size_t> batch_rows;
        std::vector<Subset> batch_tags;
        try {
            for (const auto& batch : batches) {
                batch_rows.clear();
                batch_tags.clear();
                for (std::size_t pos : batch) {
                    batch_rows.push_back(train_rows[pos]);
                    batch_tags.push_back(tags[pos]);
                }
                const BatchStats stats = accumulate_batch(result.nets.net1, result.nets.net2, ds,
                                                          batch_rows, batch_tags, ctx, g1, g2,
                                                          cfg.exec);
                adam_step(result.nets.net1, result.nets.adam1, g1, lr, cfg.weight_decay);
                adam_step(result.nets.net2, result.nets.adam2, g2, lr, cfg.weight_decay);
                sum_sup += stats.sup;
                sum_mut += stats.mut;
                sum_usc += stats.usc;
                sum_total += stats.total;
            }
        } catch (const NumericFault& fault) {
            throw NumericFault("epoch " + std::to_string(epoch) + ": " + fault.what());
        }
        const auto n_batches = static_cast<double>(batches.size());
        report.mean_sup = sum_sup / n_batches;
        report.mean_mut = sum_mut / n_batches;
        report.mean_usc = sum_usc / n_batches;
        report.mean_total = sum_total / n_batches;

        report.test_accuracy =
            evaluate_accuracy(result.nets.net1, result.nets.net2, ds, test_rows, cfg.exec);

        if (hooks.on_epoch) hooks.on_epoch(report);
        if (hooks.on_checkpoint && cfg.checkpoint_every > 0 &&
            (epoch + 1) % cfg.checkpoint_every == 0)
            hooks.on_checkpoint(epoch, result.nets);
        result.reports.push_back(std::move(report));
    }

    if (hooks.on_checkpoint) hooks.on_checkpoint(cfg.epochs - 1, result.nets);

    const std::size_t tail = std::min<std::size_t>(5, result.reports.size());
    double acc = 0.0;
    for (std::size_t i = result.reports.size() - tail; i < result.reports.size(); ++i)
        acc += result.reports[i].test_accuracy.ensemble;
    result.last5_mean_accuracy = acc / static_cast<double>(tail);
    return result;
}

DerivedSeeds derive_seeds(std::uint64_t seed) {
    return {mix_seed(seed, 1), mix_seed(seed, 2), mix_seed(seed, 3)};
}

namespace {

struct MeanStd {
    double mean = 0.0, std = 0.0;
};

MeanStd mean_and_sample_std(const std::vector<double>& xs) {
    MeanStd ms;
    if (xs.empty()) return ms;
    ms.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() < 2) return ms;
    double ss = 0.0;
    for (double x : xs) ss += (x - ms.mean) * (x - ms.mean);
    ms.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return ms;
}

}  // namespace

CompareResult run_compare(const NoisyDataset& ds, const TrainConfig& cfg,
                          const std::vector<std::uint64_t>& seeds,
                          const std::function<void(const CompareSeedRecord&)>& on_seed) {
    if (seeds.empty()) throw ConfigError("compare: seed list is empty");
    CompareResult result;
    for (std::uint64_t seed : seeds) {
        CompareSeedRecord rec;
        rec.seed = seed;
        rec.seeds = derive_seeds(seed);

        TrainConfig asm_cfg = cfg;
        asm_cfg.seed_net1 = rec.seeds.net1;
        asm_cfg.seed_net2 = rec.seeds.net2;
        asm_cfg.seed_data_order = rec.seeds.data_order;

        TrainConfig base_cfg = asm_cfg;
        base_cfg.warmup_epochs = base_cfg.epochs;  // co-trained CE throughout

        const TrainResult base_run = train(ds, base_cfg);
        const TrainResult asm_run = train(ds, asm_cfg);

        rec.baseline_accuracy = base_run.last5_mean_accuracy;
        rec.asm_accuracy = asm_run.last5_mean_accuracy;
        rec.gap = rec.asm_accuracy - rec.baseline_accuracy;
        if (!asm_run.reports.empty() && asm_run.reports.back().has_mining) {
            rec.has_mining = true;
            rec.final_mining = asm_run.reports.back().mining;
        }
        if (on_seed) on_seed(rec);
        result.per_seed.push_back(rec);
    }

    std::vector<double> base, asm_acc, gap;
    for (const auto& rec : result.per_seed) {
        base.push_back(rec.baseline_accuracy);
        asm_acc.push_back(rec.asm_accuracy);
        gap.push_back(rec.gap);
        if (rec.gap > 0.0) ++result.positive_gap_seeds;
    }
    const MeanStd b = mean_and_sample_std(base);
    const MeanStd a = mean_and_sample_std(asm_acc);
    const MeanStd g = mean_and_sample_std(gap);
    result.mean_baseline = b.mean;
    result.std_baseline = b.std;
    result.mean_asm = a.mean;
    result.std_asm = a.std;
    result.mean_gap = g.mean;
    result.std_gap = g.std;
    return result;
}

}  // namespace asmlab
