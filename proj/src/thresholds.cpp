#include "asmlab/thresholds.hpp"

#include <cmath>
#include <string>

#include "asmlab/errors.hpp"

namespace asmlab {

bool complement_holds(const ThresholdTable& table, double tol) {
    if (table.t_clean.size() != table.t_noisy.size()) return false;
    for (std::size_t k = 0; k < table.t_clean.size(); ++k) {
        if (std::abs(table.t_noisy[k] - (1.0 - table.t_clean[k])) > tol) return false;
    }
    return true;
}

ThresholdTable init_thresholds(int num_classes) {
    if (num_classes < 2)
        throw ConfigError("init_thresholds: need at least 2 classes, got " +
                          std::to_string(num_classes));
    ThresholdTable table;
    table.t_clean.assign(num_classes, 0.8);
    // computed, not the literal 0.2, so the complement identity holds
    // bitwise even for classes that later inherit this entry
    table.t_noisy.assign(num_classes, 1.0 - 0.8);
    table.epoch = -1;
    return table;
}

ThresholdTable compute_thresholds(const EpochPredictions& preds, int num_classes,
                                  const ThresholdTable& previous, int epoch) {
    if (previous.num_classes() != num_classes)
        throw ConfigError("compute_thresholds: previous table has " +
                          std::to_string(previous.num_classes()) + " classes, expected " +
                          std::to_string(num_classes));
    if (preds.size() == 0) throw ConfigError("compute_thresholds: empty predictions");

    std::vector<double> sum(num_classes, 0.0);
    std::vector<std::size_t> count(num_classes, 0);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const int y = preds.given_label[i];
        if (y < 0 || y >= num_classes)
            throw LabelError("compute_thresholds: label out of range at sample " +
                             std::to_string(i));
        if (preds.predicted_class[i] == y) {
            sum[y] += preds.confidence[i];
            count[y] += 1;
        }
    }

    ThresholdTable table;
    table.t_clean.resize(num_classes);
    table.t_noisy.resize(num_classes);
    table.epoch = epoch;
    for (int k = 0; k < num_classes; ++k) {
        if (count[k] > 0) {
            table.t_clean[k] = sum[k] / static_cast<double>(count[k]);
            table.t_noisy[k] = 1.0 - table.t_clean[k];
        } else {
            // keep the previous pair verbatim so the complement identity
            // survives the fallback
            table.t_clean[k] = previous.t_clean[k];
            table.t_noisy[k] = previous.t_noisy[k];
        }
    }
    return table;
}

}  // namespace asmlab
