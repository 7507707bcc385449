#include "asmlab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "asmlab/errors.hpp"

namespace asmlab {

DualNet make_dual_net(const std::vector<int>& layer_dims, std::uint64_t seed1,
                      std::uint64_t seed2) {
    DualNet dual;
    dual.net1 = make_initialized_net(layer_dims, seed1);
    dual.net2 = make_initialized_net(layer_dims, seed2);
    dual.adam1 = make_adam_state(dual.net1);
    dual.adam2 = make_adam_state(dual.net2);
    return dual;
}

EpochPredictions predict(const DenseNet& net1, const DenseNet& net2, const NoisyDataset& ds,
                         std::span<const std::size_t> rows, Exec exec) {
    EpochPredictions preds;
    const std::size_t n = rows.size();
    const int k = net1.num_classes();
    preds.num_classes = k;
    preds.avg_probs.assign(n, {});
    preds.confidence.assign(n, 0.0);
    preds.predicted_class.assign(n, 0);
    preds.given_label.assign(n, 0);

    for_each_index(n, exec, [&](std::size_t i) {
        const auto x = ds.sample(rows[i]);
        const auto p1 = forward(net1, x);
        const auto p2 = forward(net2, x);
        std::vector<double> avg(p1.size());
        for (std::size_t c = 0; c < avg.size(); ++c) avg[c] = 0.5 * (p1[c] + p2[c]);
        const auto best = std::max_element(avg.begin(), avg.end());
        preds.confidence[i] = *best;
        preds.predicted_class[i] = static_cast<int>(best - avg.begin());
        preds.given_label[i] = ds.given_labels[rows[i]];
        preds.avg_probs[i] = std::move(avg);
    });
    return preds;
}

AccuracyRecord evaluate_accuracy(const DenseNet& net1, const DenseNet& net2,
                                 const NoisyDataset& ds, std::span<const std::size_t> rows,
                                 Exec exec) {
    if (rows.empty()) throw ConfigError("evaluate_accuracy: empty split");
    const std::size_t n = rows.size();
    std::vector<std::uint8_t> ok1(n, 0), ok2(n, 0), ok_ens(n, 0);

    for_each_index(n, exec, [&](std::size_t i) {
        const auto x = ds.sample(rows[i]);
        const auto p1 = forward(net1, x);
        const auto p2 = forward(net2, x);
        std::vector<double> avg(p1.size());
        for (std::size_t c = 0; c < avg.size(); ++c) avg[c] = 0.5 * (p1[c] + p2[c]);
        const int truth = ds.true_labels[rows[i]];
        const auto argmax = [](const std::vector<double>& p) {
            return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
        };
        ok1[i] = argmax(p1) == truth;
        ok2[i] = argmax(p2) == truth;
        ok_ens[i] = argmax(avg) == truth;
    });

    AccuracyRecord acc;
    acc.count = n;
    std::size_t c1 = 0, c2 = 0, ce = 0;
    for (std::size_t i = 0; i < n; ++i) {
        c1 += ok1[i];
        c2 += ok2[i];
        ce += ok_ens[i];
    }
    acc.net1 = static_cast<double>(c1) / static_cast<double>(n);
    acc.net2 = static_cast<double>(c2) / static_cast<double>(n);
    acc.ensemble = static_cast<double>(ce) / static_cast<double>(n);
    return acc;
}

namespace {

struct SampleSlot {
    GradientBundle g1, g2;
    double sup = 0.0, mut = 0.0, usc = 0.0;
    bool has_grad = false;
};

std::mt19937_64 sample_rng(std::uint64_t aug_seed, std::size_t row) {
    return std::mt19937_64(mix_seed(aug_seed, static_cast<std::uint64_t>(row)));
}

}  // namespace

BatchStats accumulate_batch(const DenseNet& net1, const DenseNet& net2, const NoisyDataset& ds,
                            std::span<const std::size_t> batch_rows,
                            std::span<const Subset> batch_tags, const BatchContext& ctx,
                            GradientBundle& g1, GradientBundle& g2, Exec exec) {
    if (batch_rows.size() != batch_tags.size())
        throw ShapeError("accumulate_batch: rows/tags length mismatch");

    BatchStats stats;
    for (Subset tag : batch_tags) {
        switch (tag) {
            case Subset::Clean: ++stats.n_clean; break;
            case Subset::Ambiguous: ++stats.n_ambiguous; break;
            case Subset::Noisy: ++stats.n_noisy; break;
        }
    }
    const double k_inv = 1.0 / static_cast<double>(net1.num_classes());
    const bool want_mut_grad = ctx.weights.omega != 0.0 && stats.n_ambiguous > 0;
    const bool want_usc_grad = ctx.weights.gamma != 0.0 && stats.n_noisy > 0;

    const std::size_t n = batch_rows.size();
    std::vector<SampleSlot> slots(n);

    for_each_index(n, exec, [&](std::size_t j) {
        SampleSlot& slot = slots[j];
        const std::size_t row = batch_rows[j];
        const auto x = ds.sample(row);
        const int y = ds.given_labels[row];

        switch (batch_tags[j]) {
            case Subset::Clean: {
                const auto t1 = forward_trace(net1, x);
                const auto t2 = forward_trace(net2, x);
                slot.sup = supervised_loss(t1.probs, t2.probs, y);
                slot.g1 = backward(net1, t1, cross_entropy_grad(t1.probs, y));
                slot.g2 = backward(net2, t2, cross_entropy_grad(t2.probs, y));
                slot.has_grad = true;
                break;
            }
            case Subset::Ambiguous: {
                const auto t1 = forward_trace(net1, x);
                const auto t2 = forward_trace(net2, x);
                slot.mut = mutual_loss(t1.probs, t2.probs, y, ctx.lambda);
                if (want_mut_grad) {
                    std::vector<double> d_skl1, d_skl2;
                    symmetric_kl_grad(t1.probs, t2.probs, d_skl1, d_skl2);
                    auto u1 = cross_entropy_grad(t1.probs, y);
                    auto u2 = cross_entropy_grad(t2.probs, y);
                    for (std::size_t c = 0; c < u1.size(); ++c) {
                        u1[c] = (1.0 - ctx.lambda) * u1[c] + ctx.lambda * d_skl1[c];
                        u2[c] = (1.0 - ctx.lambda) * u2[c] + ctx.lambda * d_skl2[c];
                    }
                    slot.g1 = backward(net1, t1, u1);
                    slot.g2 = backward(net2, t2, u2);
                    slot.has_grad = true;
                }
                break;
            }
            case Subset::Noisy: {
                // weak/strong views of the same sample, fed to both
                // networks; the given label is never used here
                auto rng = sample_rng(ctx.aug_seed, row);
                const auto xw = augment(x, ctx.aug, AugMode::Weak, rng);
                const auto xs = augment(x, ctx.aug, AugMode::Strong, rng);
                const auto tw1 = forward_trace(net1, xw);
                const auto ts1 = forward_trace(net1, xs);
                const auto tw2 = forward_trace(net2, xw);
                const auto ts2 = forward_trace(net2, xs);
                slot.usc = consistency_loss(tw1.probs, ts1.probs, tw2.probs, ts2.probs);
                if (want_usc_grad) {
                    const std::size_t kk = tw1.probs.size();
                    std::vector<double> dw1(kk), ds1(kk), dw2(kk), ds2(kk);
                    for (std::size_t c = 0; c < kk; ++c) {
                        const double d1 = 2.0 * k_inv * (tw1.probs[c] - ts1.probs[c]);
                        const double d2 = 2.0 * k_inv * (tw2.probs[c] - ts2.probs[c]);
                        dw1[c] = d1;
                        ds1[c] = -d1;
                        dw2[c] = d2;
                        ds2[c] = -d2;
                    }
                    slot.g1 = backward(net1, ts1, ds1);
                    slot.g2 = backward(net2, ts2, ds2);
                    if (!ctx.stop_weak_gradient) {
                        add(slot.g1, backward(net1, tw1, dw1));
                        add(slot.g2, backward(net2, tw2, dw2));
                    }
                    slot.has_grad = true;
                }
                break;
            }
        }
    });

    // serial reduction in batch order; identical for both exec policies
    g1 = make_zero_gradients(net1);
    g2 = make_zero_gradients(net2);
    const double w_clean = stats.n_clean > 0 ? 1.0 / static_cast<double>(stats.n_clean) : 0.0;
    const double w_mut =
        stats.n_ambiguous > 0 ? ctx.weights.omega / static_cast<double>(stats.n_ambiguous) : 0.0;
    const double w_usc =
        stats.n_noisy > 0 ? ctx.weights.gamma / static_cast<double>(stats.n_noisy) : 0.0;

    for (std::size_t j = 0; j < n; ++j) {
        const SampleSlot& slot = slots[j];
        stats.sup += slot.sup;
        stats.mut += slot.mut;
        stats.usc += slot.usc;
        if (!slot.has_grad) continue;
        switch (batch_tags[j]) {
            case Subset::Clean:
                add_scaled(g1, slot.g1, w_clean);
                add_scaled(g2, slot.g2, w_clean);
                break;
            case Subset::Ambiguous:
                add_scaled(g1, slot.g1, w_mut);
                add_scaled(g2, slot.g2, w_mut);
                break;
            case Subset::Noisy:
                add_scaled(g1, slot.g1, w_usc);
                add_scaled(g2, slot.g2, w_usc);
                break;
        }
    }
    if (stats.n_clean > 0) stats.sup /= static_cast<double>(stats.n_clean);
    if (stats.n_ambiguous > 0) stats.mut /= static_cast<double>(stats.n_ambiguous);
    if (stats.n_noisy > 0) stats.usc /= static_cast<double>(stats.n_noisy);
    stats.total = total_loss(stats.sup, stats.mut, stats.usc, ctx.weights);
    g1.loss = stats.total;
    g2.loss = stats.total;
    if (!all_finite(g1) || !all_finite(g2))
        throw NumericFault("accumulate_batch: non-finite gradient");
    return stats;
}

}  // namespace asmlab
