#include "asmlab/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "asmlab/errors.hpp"

namespace asmlab {

std::string fnv1a64_bytes(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

std::string fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file for hashing: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64_bytes(ss.str());
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["resolved_config"] = manifest.resolved_config;
    j["inputs"] = manifest.inputs;
    j["outputs"] = manifest.outputs;
    j["artifact_hashes"] = manifest.artifact_hashes;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write manifest: " + path);
    out << j.dump(2) << "\n";
}

nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("config " + path + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config " + path + ": expected a JSON object");
    if (j.contains("command") && j.contains("resolved_config"))
        return j.at("resolved_config");  // manifest rerun
    return j;
}

namespace {

class FieldReader {
public:
    FieldReader(const nlohmann::json& j, std::string context)
        : j_(j), context_(std::move(context)) {}

    template <typename T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            throw ConfigError(context_ + ": field '" + key + "' has the wrong type");
        }
    }

    void reject_unknown() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.contains(key))
                throw ConfigError(context_ + ": unknown field '" + key + "'");
        }
    }

private:
    const nlohmann::json& j_;
    std::string context_;
    std::set<std::string> seen_;
};

}  // namespace

nlohmann::json to_json(const DataGenConfig& cfg) {
    return {{"k", cfg.k},
            {"d", cfg.d},
            {"n_per_class", cfg.n_per_class},
            {"n_test_per_class", cfg.n_test_per_class},
            {"separation", cfg.separation},
            {"ambiguous_fraction", cfg.ambiguous_fraction},
            {"noise_ratio", cfg.noise_ratio},
            {"seed", cfg.seed}};
}

DataGenConfig gen_config_from_json(const nlohmann::json& j) {
    DataGenConfig cfg;
    FieldReader reader(j, "gen config");
    reader.read("k", cfg.k);
    reader.read("d", cfg.d);
    reader.read("n_per_class", cfg.n_per_class);
    reader.read("n_test_per_class", cfg.n_test_per_class);
    reader.read("separation", cfg.separation);
    reader.read("ambiguous_fraction", cfg.ambiguous_fraction);
    reader.read("noise_ratio", cfg.noise_ratio);
    reader.read("seed", cfg.seed);
    reader.reject_unknown();
    validate(cfg);
    return cfg;
}

nlohmann::json to_json(const TrainConfig& cfg) {
    return {{"epochs", cfg.epochs},
            {"warmup_epochs", cfg.warmup_epochs},
            {"batch_size", cfg.batch_size},
            {"lr", cfg.lr},
            {"lr_gamma", cfg.lr_gamma},
            {"weight_decay", cfg.weight_decay},
            {"lambda_max", cfg.ramp.lambda_max},
            {"beta", cfg.ramp.beta},
            {"e_r", cfg.ramp.e_r},
            {"omega", cfg.weights.omega},
            {"gamma", cfg.weights.gamma},
            {"seed_net1", cfg.seed_net1},
            {"seed_net2", cfg.seed_net2},
            {"seed_data_order", cfg.seed_data_order},
            {"stop_weak_gradient", cfg.stop_weak_gradient},
            {"hidden_dims", cfg.hidden_dims},
            {"weak_sigma", cfg.aug.weak_sigma},
            {"strong_sigma", cfg.aug.strong_sigma},
            {"mask_prob", cfg.aug.mask_prob},
            {"checkpoint_every", cfg.checkpoint_every}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
    TrainConfig cfg;
    FieldReader reader(j, "train config");
    reader.read("epochs", cfg.epochs);
    reader.read("warmup_epochs", cfg.warmup_epochs);
    reader.read("batch_size", cfg.batch_size);
    reader.read("lr", cfg.lr);
    reader.read("lr_gamma", cfg.lr_gamma);
    reader.read("weight_decay", cfg.weight_decay);
    reader.read("lambda_max", cfg.ramp.lambda_max);
    reader.read("beta", cfg.ramp.beta);
    reader.read("e_r", cfg.ramp.e_r);
    reader.read("omega", cfg.weights.omega);
    reader.read("gamma", cfg.weights.gamma);
    reader.read("seed_net1", cfg.seed_net1);
    reader.read("seed_net2", cfg.seed_net2);
    reader.read("seed_data_order", cfg.seed_data_order);
    reader.read("stop_weak_gradient", cfg.stop_weak_gradient);
    reader.read("hidden_dims", cfg.hidden_dims);
    reader.read("weak_sigma", cfg.aug.weak_sigma);
    reader.read("strong_sigma", cfg.aug.strong_sigma);
    reader.read("mask_prob", cfg.aug.mask_prob);
    reader.read("checkpoint_every", cfg.checkpoint_every);
    reader.reject_unknown();
    validate(cfg);
    return cfg;
}

}  // namespace asmlab
