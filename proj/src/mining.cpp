#include "asmlab/mining.hpp"

#include <string>

#include "asmlab/errors.hpp"

namespace asmlab {

const char* subset_name(Subset s) {
    switch (s) {
        case Subset::Clean: return "clean";
        case Subset::Ambiguous: return "ambiguous";
        case Subset::Noisy: return "noisy";
    }
    return "?";
}

double confidence(std::span<const double> p1, std::span<const double> p2) {
    if (p1.size() != p2.size() || p1.empty())
        throw ShapeError("confidence: probability vectors differ in length");
    double best = 0.0;
    for (std::size_t k = 0; k < p1.size(); ++k) {
        const double avg = 0.5 * (p1[k] + p2[k]);
        if (avg > best) best = avg;
    }
    return best;
}

Subset classify_sample(double s, int y, const ThresholdTable& thresholds) {
    if (y < 0 || y >= thresholds.num_classes())
        throw LabelError("classify_sample: label " + std::to_string(y) +
                         " out of range for K=" + std::to_string(thresholds.num_classes()));
    if (s < thresholds.t_noisy[y]) return Subset::Noisy;
    if (s > thresholds.t_clean[y]) return Subset::Clean;
    return Subset::Ambiguous;
}

Partition partition(const EpochPredictions& preds, const ThresholdTable& thresholds) {
    Partition part;
    part.assignment.resize(preds.size());
    part.epoch = thresholds.epoch;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const Subset s = classify_sample(preds.confidence[i], preds.given_label[i], thresholds);
        part.assignment[i] = s;
        switch (s) {
            case Subset::Clean: part.clean.push_back(i); break;
            case Subset::Ambiguous: part.ambiguous.push_back(i); break;
            case Subset::Noisy: part.noisy.push_back(i); break;
        }
    }
    return part;
}

MiningQuality mining_quality(const Partition& part, std::span<const std::uint8_t> noise_mask) {
    if (noise_mask.size() != part.size())
        throw ShapeError("mining_quality: mask length " + std::to_string(noise_mask.size()) +
                         " does not match partition size " + std::to_string(part.size()));
    std::size_t mask_total = 0;
    std::size_t in_clean = 0, in_ambiguous = 0, in_noisy = 0;
    for (std::size_t i = 0; i < part.size(); ++i) {
        if (!noise_mask[i]) continue;
        ++mask_total;
        switch (part.assignment[i]) {
            case Subset::Clean: ++in_clean; break;
            case Subset::Ambiguous: ++in_ambiguous; break;
            case Subset::Noisy: ++in_noisy; break;
        }
    }
    MiningQuality q;
    if (!part.noisy.empty())
        q.precision = static_cast<double>(in_noisy) / static_cast<double>(part.noisy.size());
    if (mask_total > 0) {
        q.recall = static_cast<double>(in_noisy) / static_cast<double>(mask_total);
        q.noise_in_clean = static_cast<double>(in_clean) / static_cast<double>(mask_total);
        q.noise_in_ambiguous = static_cast<double>(in_ambiguous) / static_cast<double>(mask_total);
        q.noise_in_noisy = static_cast<double>(in_noisy) / static_cast<double>(mask_total);
    }
    return q;
}

}  // namespace asmlab
