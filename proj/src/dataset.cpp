#include "asmlab/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "asmlab/errors.hpp"
#include "asmlab/parallel.hpp"

namespace asmlab {

std::vector<std::size_t> NoisyDataset::train_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < size(); ++i)
        if (split[i] == Split::Train) idx.push_back(i);
    return idx;
}

std::vector<std::size_t> NoisyDataset::test_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < size(); ++i)
        if (split[i] == Split::Test) idx.push_back(i);
    return idx;
}

namespace {

// K points in R^dim, pairwise `separation` apart, centered at the origin.
// Built from the scaled standard simplex in R^K and re-expressed in an
// orthonormal basis of its span (dimension K-1) via Gram-Schmidt.
std::vector<std::vector<double>> simplex_centers(int k, int dim, double separation) {
    if (dim < k - 1)
        throw ConfigError("generate_clusters: need dim >= K-1 to embed " + std::to_string(k) +
                          " equidistant centers, got dim=" + std::to_string(dim));
    const double scale = separation / std::sqrt(2.0);
    // centered simplex vertices in R^K
    std::vector<std::vector<double>> q(k, std::vector<double>(k, -scale / k));
    for (int i = 0; i < k; ++i) q[i][i] += scale;

    std::vector<std::vector<double>> basis;
    for (int i = 0; i < k && static_cast<int>(basis.size()) < k - 1; ++i) {
        std::vector<double> v = q[i];
        for (const auto& b : basis) {
            const double proj = std::inner_product(v.begin(), v.end(), b.begin(), 0.0);
            for (int j = 0; j < k; ++j) v[j] -= proj * b[j];
        }
        const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        if (norm < 1e-9) continue;
        for (double& x : v) x /= norm;
        basis.push_back(std::move(v));
    }

    std::vector<std::vector<double>> centers(k, std::vector<double>(dim, 0.0));
    for (int i = 0; i < k; ++i)
        for (std::size_t j = 0; j < basis.size(); ++j)
            centers[i][j] =
                std::inner_product(q[i].begin(), q[i].end(), basis[j].begin(), 0.0);
    return centers;
}

}  // namespace

NoisyDataset generate_clusters(int num_classes, int dim, int n_train_per_class,
                               int n_test_per_class, double separation,
                               double ambiguous_fraction, std::uint64_t seed) {
    if (num_classes < 2) throw ConfigError("generate_clusters: K must be >= 2");
    if (dim < 2) throw ConfigError("generate_clusters: dim must be >= 2");
    if (n_train_per_class < 1) throw ConfigError("generate_clusters: n_per_class must be >= 1");
    if (n_test_per_class < 0) throw ConfigError("generate_clusters: n_test_per_class must be >= 0");
    if (!(separation > 0.0)) throw ConfigError("generate_clusters: separation must be positive");
    if (ambiguous_fraction < 0.0 || ambiguous_fraction >= 1.0)
        throw ConfigError("generate_clusters: ambiguous_fraction must lie in [0, 1)");

    const auto centers = simplex_centers(num_classes, dim, separation);

    NoisyDataset ds;
    ds.num_classes = num_classes;
    ds.dim = dim;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit_normal(0.0, 1.0);
    std::uniform_real_distribution<double> mix_weight(0.35, 0.65);

    auto emit_block = [&](int cls, int count, Split split_tag) {
        const int n_ambiguous =
            static_cast<int>(std::floor(ambiguous_fraction * static_cast<double>(count)));
        for (int i = 0; i < count; ++i) {
            std::vector<double> mean = centers[cls];
            if (i < n_ambiguous) {
                int other = static_cast<int>(rng() % static_cast<std::uint64_t>(num_classes - 1));
                if (other >= cls) ++other;
                const double w = mix_weight(rng);
                for (int j = 0; j < dim; ++j)
                    mean[j] = (1.0 - w) * centers[cls][j] + w * centers[other][j];
            }
            for (int j = 0; j < dim; ++j) ds.features.push_back(mean[j] + unit_normal(rng));
            ds.given_labels.push_back(cls);
            ds.true_labels.push_back(cls);
            ds.noise_mask.push_back(0);
            ds.split.push_back(split_tag);
        }
    };

    for (int cls = 0; cls < num_classes; ++cls) emit_block(cls, n_train_per_class, Split::Train);
    for (int cls = 0; cls < num_classes; ++cls) emit_block(cls, n_test_per_class, Split::Test);
    return ds;
}

void inject_symmetric_noise(NoisyDataset& ds, double ratio, std::uint64_t seed) {
    if (ratio < 0.0 || ratio >= 1.0)
        throw ConfigError("inject_symmetric_noise: ratio must lie in [0, 1)");
    if (std::any_of(ds.noise_mask.begin(), ds.noise_mask.end(),
                    [](std::uint8_t m) { return m != 0; }))
        throw ConfigError("inject_symmetric_noise: dataset already carries injected noise");

    std::vector<std::size_t> train = ds.train_indices();
    const auto n_flip =
        static_cast<std::size_t>(std::floor(ratio * static_cast<double>(train.size())));
    if (n_flip == 0) return;

    std::mt19937_64 rng(seed);
    std::shuffle(train.begin(), train.end(), rng);
    for (std::size_t i = 0; i < n_flip; ++i) {
        const std::size_t idx = train[i];
        const int y = ds.given_labels[idx];
        int other = static_cast<int>(rng() % static_cast<std::uint64_t>(ds.num_classes - 1));
        if (other >= y) ++other;
        ds.given_labels[idx] = other;
        ds.noise_mask[idx] = 1;
    }
}

void validate_policy(const AugmentationPolicy& policy) {
    if (policy.weak_sigma < 0.0 || policy.strong_sigma < 0.0)
        throw ConfigError("augmentation: sigmas must be non-negative");
    if (policy.strong_sigma < policy.weak_sigma)
        throw ConfigError("augmentation: strong_sigma must be >= weak_sigma");
    if (policy.mask_prob < 0.0 || policy.mask_prob > 1.0)
        throw ConfigError("augmentation: mask_prob must lie in [0, 1]");
}

std::vector<double> augment(std::span<const double> x, const AugmentationPolicy& policy,
                            AugMode mode, std::mt19937_64& rng) {
    validate_policy(policy);
    std::vector<double> out(x.begin(), x.end());
    const double sigma = mode == AugMode::Weak ? policy.weak_sigma : policy.strong_sigma;
    if (sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, sigma);
        for (double& v : out) v += noise(rng);
    }
    if (mode == AugMode::Strong && policy.mask_prob > 0.0) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (double& v : out)
            if (u(rng) < policy.mask_prob) v = 0.0;
    }
    return out;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

double parse_double(const std::string& field, std::size_t line_no) {
    double v = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("csv line " + std::to_string(line_no) + ": bad number '" + field + "'");
    return v;
}

long parse_long(const std::string& field, std::size_t line_no) {
    long v = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("csv line " + std::to_string(line_no) + ": bad integer '" + field + "'");
    return v;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

void save_csv(const NoisyDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("save_csv: cannot open " + path + " for writing");
    out << "id,split,given_label,true_label,is_noisy";
    for (int j = 0; j < ds.dim; ++j) out << ",f" << j;
    out << "\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out << i << ',' << (ds.split[i] == Split::Train ? "train" : "test") << ','
            << ds.given_labels[i] << ',' << ds.true_labels[i] << ','
            << static_cast<int>(ds.noise_mask[i]);
        const auto row = ds.sample(i);
        for (double v : row) out << ',' << format_double(v);
        out << "\n";
    }
    if (!out) throw ParseError("save_csv: write to " + path + " failed");
}

NoisyDataset load_csv(const std::string& path, int expected_classes) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_csv: cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError("load_csv: " + path + " is empty");
    const auto header = split_fields(line);
    if (header.size() < 6 || header[0] != "id" || header[1] != "split" ||
        header[2] != "given_label" || header[3] != "true_label" || header[4] != "is_noisy")
        throw ParseError("load_csv: unexpected header in " + path);
    const int dim = static_cast<int>(header.size()) - 5;
    for (int j = 0; j < dim; ++j)
        if (header[5 + j] != "f" + std::to_string(j))
            throw ParseError("load_csv: unexpected feature column '" + header[5 + j] + "'");

    NoisyDataset ds;
    ds.dim = dim;
    std::size_t line_no = 1;
    int max_label = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size())
            throw ParseError("csv line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        const long id = parse_long(fields[0], line_no);
        if (id != static_cast<long>(ds.size()))
            throw ParseError("csv line " + std::to_string(line_no) + ": id out of order");
        Split split_tag;
        if (fields[1] == "train") split_tag = Split::Train;
        else if (fields[1] == "test") split_tag = Split::Test;
        else throw ParseError("csv line " + std::to_string(line_no) + ": bad split '" +
                              fields[1] + "'");
        const long given = parse_long(fields[2], line_no);
        const long truth = parse_long(fields[3], line_no);
        const long noisy = parse_long(fields[4], line_no);
        if (given < 0 || truth < 0)
            throw ParseError("csv line " + std::to_string(line_no) + ": negative label");
        if (expected_classes > 0 && (given >= expected_classes || truth >= expected_classes))
            throw ParseError("csv line " + std::to_string(line_no) + ": label out of range [0, " +
                             std::to_string(expected_classes) + ")");
        if (noisy != 0 && noisy != 1)
            throw ParseError("csv line " + std::to_string(line_no) + ": is_noisy must be 0 or 1");
        if ((noisy == 1) != (given != truth))
            throw ParseError("csv line " + std::to_string(line_no) +
                             ": is_noisy inconsistent with labels");
        ds.given_labels.push_back(static_cast<int>(given));
        ds.true_labels.push_back(static_cast<int>(truth));
        ds.noise_mask.push_back(static_cast<std::uint8_t>(noisy));
        ds.split.push_back(split_tag);
        for (int j = 0; j < dim; ++j) ds.features.push_back(parse_double(fields[5 + j], line_no));
        max_label = std::max(max_label, static_cast<int>(std::max(given, truth)));
    }
    if (ds.size() == 0) throw ParseError("load_csv: " + path + " has no data rows");
    ds.num_classes = expected_classes > 0 ? expected_classes : max_label + 1;
    if (ds.num_classes < 2) ds.num_classes = 2;
    return ds;
}

void validate(const DataGenConfig& cfg) {
    if (cfg.k < 2) throw ConfigError("gen config: k must be >= 2");
    if (cfg.d < 2) throw ConfigError("gen config: d must be >= 2");
    if (cfg.d < cfg.k - 1) throw ConfigError("gen config: d must be >= k-1");
    if (cfg.n_per_class < 1) throw ConfigError("gen config: n_per_class must be >= 1");
    if (cfg.n_test_per_class < 0) throw ConfigError("gen config: n_test_per_class must be >= 0");
    if (!(cfg.separation > 0.0)) throw ConfigError("gen config: separation must be positive");
    if (cfg.ambiguous_fraction < 0.0 || cfg.ambiguous_fraction >= 1.0)
        throw ConfigError("gen config: ambiguous_fraction must lie in [0, 1)");
    if (cfg.noise_ratio < 0.0 || cfg.noise_ratio >= 1.0)
        throw ConfigError("gen config: noise_ratio must lie in [0, 1)");
}

NoisyDataset build_dataset(const DataGenConfig& cfg) {
    validate(cfg);
    NoisyDataset ds = generate_clusters(cfg.k, cfg.d, cfg.n_per_class, cfg.n_test_per_class,
                                        cfg.separation, cfg.ambiguous_fraction, cfg.seed);
    inject_symmetric_noise(ds, cfg.noise_ratio, mix_seed(cfg.seed, 0x6e6f697365ULL));
    return ds;
}

}  // namespace asmlab
