#pragma once

#include <vector>

namespace asmlab {

// Per-class clean/noisy threshold pair, recomputed once per epoch.
// t_noisy[k] == 1 - t_clean[k] for tables produced by this module.
struct ThresholdTable {
    std::vector<double> t_clean;
    std::vector<double> t_noisy;
    int epoch = -1;

    int num_classes() const { return static_cast<int>(t_clean.size()); }
};

bool complement_holds(const ThresholdTable& table, double tol = 1e-12);

// Snapshot of one evaluation pass over the training set: averaged softmax
// output of the two networks plus the derived per-sample summaries.
struct EpochPredictions {
    int num_classes = 0;
    std::vector<std::vector<double>> avg_probs;
    std::vector<double> confidence;      // max entry of avg_probs
    std::vector<int> predicted_class;    // argmax of avg_probs
    std::vector<int> given_label;

    std::size_t size() const { return confidence.size(); }
};

// Initial table: t_clean = 0.8 and t_noisy = 0.2 for every class, epoch -1.
// Throws ConfigError for K < 2.
ThresholdTable init_thresholds(int num_classes);

// For each class k, t_clean[k] is the mean confidence of samples whose
// predicted class equals their given label, both equal to k; summed in
// ascending sample order. t_noisy[k] = 1 - t_clean[k]. Classes with no
// correctly-predicted samples inherit the previous table's entries.
ThresholdTable compute_thresholds(const EpochPredictions& preds, int num_classes,
                                  const ThresholdTable& previous, int epoch);

}  // namespace asmlab
