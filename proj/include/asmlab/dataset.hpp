#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace asmlab {

enum class Split : std::uint8_t { Train = 0, Test = 1 };

// Synthetic classification dataset with hidden true labels and a noise
// mask for evaluation. noise_mask[i] holds exactly when given != true.
struct NoisyDataset {
    int num_classes = 0;
    int dim = 0;
    std::vector<double> features;  // row-major, size() == size * dim
    std::vector<int> given_labels;
    std::vector<int> true_labels;
    std::vector<std::uint8_t> noise_mask;
    std::vector<Split> split;

    std::size_t size() const { return given_labels.size(); }
    std::span<const double> sample(std::size_t i) const {
        return {features.data() + i * static_cast<std::size_t>(dim),
                static_cast<std::size_t>(dim)};
    }
    std::vector<std::size_t> train_indices() const;
    std::vector<std::size_t> test_indices() const;
};

// K Gaussian clusters (unit variance) with centers pairwise `separation`
// apart on a scaled simplex. An ambiguous_fraction of each class block is
// drawn from the midpoint region between its own center and a random other
// center (mixing weight uniform in [0.35, 0.65]); true labels are the
// generating class and given == true. Deterministic per seed.
// Needs dim >= num_classes - 1 to embed the simplex.
NoisyDataset generate_clusters(int num_classes, int dim, int n_train_per_class,
                               int n_test_per_class, double separation,
                               double ambiguous_fraction, std::uint64_t seed);

// Flips the given label of exactly floor(ratio * N_train) training samples,
// chosen uniformly without replacement, to a uniform other class. The test
// split is untouched. Throws ConfigError on ratio >= 1 or re-injection.
void inject_symmetric_noise(NoisyDataset& ds, double ratio, std::uint64_t seed);

// Feature-space stand-ins for image augmentation: Gaussian jitter (weak)
// and stronger jitter plus random coordinate masking (strong).
struct AugmentationPolicy {
    double weak_sigma = 0.1;
    double strong_sigma = 0.5;
    double mask_prob = 0.2;
};

enum class AugMode { Weak, Strong };

void validate_policy(const AugmentationPolicy& policy);

std::vector<double> augment(std::span<const double> x, const AugmentationPolicy& policy,
                            AugMode mode, std::mt19937_64& rng);

// CSV persistence. Header: id,split,given_label,true_label,is_noisy,f0..f{D-1}.
// Features round-trip losslessly. load_csv validates labels against
// expected_classes when positive, otherwise infers K = max label + 1.
void save_csv(const NoisyDataset& ds, const std::string& path);
NoisyDataset load_csv(const std::string& path, int expected_classes = 0);

// Generation config mirrored by the gen-data CLI and its manifest.
struct DataGenConfig {
    int k = 3;
    int d = 8;
    int n_per_class = 1000;       // training samples per class
    int n_test_per_class = 300;
    double separation = 6.0;
    double ambiguous_fraction = 0.2;
    double noise_ratio = 0.0;
    std::uint64_t seed = 7;
};

void validate(const DataGenConfig& cfg);

// generate_clusters followed by noise injection at cfg.noise_ratio.
NoisyDataset build_dataset(const DataGenConfig& cfg);

}  // namespace asmlab
