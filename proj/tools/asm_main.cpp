// Operator surface for the adaptive sample mining lab: dataset generation,
// training runs, dataset audits, and baseline-vs-ASM comparisons.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "asmlab/dataset.hpp"
#include "asmlab/engine.hpp"
#include "asmlab/errors.hpp"
#include "asmlab/manifest.hpp"
#include "asmlab/mining.hpp"
#include "asmlab/net.hpp"
#include "asmlab/parallel.hpp"
#include "asmlab/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool debug_logging() {
    const char* env = std::getenv("ASM_LOG");
    return env != nullptr && std::string(env) == "debug";
}

void log_info(const std::string& msg) { std::cerr << "[asm] " << msg << "\n"; }

void log_debug(const std::string& msg) {
    if (debug_logging()) std::cerr << "[asm] " << msg << "\n";
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw asmlab::ConfigError("cannot write " + path);
    out << text;
}

json dual_checkpoint_json(const asmlab::DualNet& nets, std::uint64_t seed1, std::uint64_t seed2,
                          int epoch) {
    json j;
    j["format_version"] = 1;
    j["epoch"] = epoch;
    j["net1"] = json::parse(asmlab::checkpoint_to_json(nets.net1, seed1, epoch));
    j["net2"] = json::parse(asmlab::checkpoint_to_json(nets.net2, seed2, epoch));
    return j;
}

struct DualCheckpoint {
    asmlab::Checkpoint net1, net2;
    int epoch = 0;
};

DualCheckpoint load_dual_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw asmlab::ConfigError("cannot open checkpoint: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw asmlab::ParseError("checkpoint " + path + ": invalid JSON: " + e.what());
    }
    if (!j.contains("net1") || !j.contains("net2"))
        throw asmlab::ParseError("checkpoint " + path + ": expected net1 and net2 entries");
    DualCheckpoint ck;
    ck.net1 = asmlab::checkpoint_from_json(j.at("net1").dump());
    ck.net2 = asmlab::checkpoint_from_json(j.at("net2").dump());
    ck.epoch = j.value("epoch", ck.net1.epoch);
    return ck;
}

// flag > file > default: only touch fields whose flag was actually given
template <typename T>
void apply_if_set(const CLI::App* cmd, const std::string& flag, T& target, const T& value) {
    if (cmd->count(flag) > 0) target = value;
}

struct TrainCliFlags {
    int epochs = 0, warmup = 0, batch_size = 0, e_r = 0, checkpoint_every = 0;
    double lr = 0, lr_gamma = 0, weight_decay = 0, lambda_max = 0, beta = 0, omega = 0,
           gamma = 0, weak_sigma = 0, strong_sigma = 0, mask_prob = 0;
    std::uint64_t seed_net1 = 0, seed_net2 = 0, seed_data_order = 0;
    bool stop_weak_gradient = false;
    std::vector<int> hidden_dims;
};

void add_train_flags(CLI::App* cmd, TrainCliFlags& f) {
    cmd->add_option("--epochs", f.epochs, "total epochs");
    cmd->add_option("--warmup-epochs,--warmup", f.warmup, "supervised warm-up epochs");
    cmd->add_option("--batch-size", f.batch_size, "minibatch size");
    cmd->add_option("--lr", f.lr, "initial learning rate");
    cmd->add_option("--lr-gamma", f.lr_gamma, "per-epoch exponential lr decay");
    cmd->add_option("--weight-decay", f.weight_decay, "decoupled weight decay");
    cmd->add_option("--lambda-max", f.lambda_max, "ramp plateau value");
    cmd->add_option("--beta", f.beta, "ramp shape parameter");
    cmd->add_option("--e-r", f.e_r, "epoch at which the ramp reaches lambda_max");
    cmd->add_option("--omega", f.omega, "mutual loss weight");
    cmd->add_option("--gamma", f.gamma, "consistency loss weight");
    cmd->add_option("--seed-net1", f.seed_net1, "init seed for network 1");
    cmd->add_option("--seed-net2", f.seed_net2, "init seed for network 2");
    cmd->add_option("--seed-data-order", f.seed_data_order, "shuffle/augmentation seed");
    cmd->add_flag("--stop-weak-gradient", f.stop_weak_gradient,
                  "block consistency gradients through the weak branch");
    cmd->add_option("--hidden-dims", f.hidden_dims, "hidden layer sizes")->delimiter(',');
    cmd->add_option("--weak-sigma", f.weak_sigma, "weak augmentation noise scale");
    cmd->add_option("--strong-sigma", f.strong_sigma, "strong augmentation noise scale");
    cmd->add_option("--mask-prob", f.mask_prob, "strong augmentation masking probability");
    cmd->add_option("--checkpoint-every", f.checkpoint_every, "checkpoint cadence in epochs");
}

void merge_train_flags(const CLI::App* cmd, const TrainCliFlags& f, asmlab::TrainConfig& cfg) {
    apply_if_set(cmd, "--epochs", cfg.epochs, f.epochs);
    apply_if_set(cmd, "--warmup-epochs", cfg.warmup_epochs, f.warmup);
    apply_if_set(cmd, "--batch-size", cfg.batch_size, f.batch_size);
    apply_if_set(cmd, "--lr", cfg.lr, f.lr);
    apply_if_set(cmd, "--lr-gamma", cfg.lr_gamma, f.lr_gamma);
    apply_if_set(cmd, "--weight-decay", cfg.weight_decay, f.weight_decay);
    apply_if_set(cmd, "--lambda-max", cfg.ramp.lambda_max, f.lambda_max);
    apply_if_set(cmd, "--beta", cfg.ramp.beta, f.beta);
    apply_if_set(cmd, "--e-r", cfg.ramp.e_r, f.e_r);
    apply_if_set(cmd, "--omega", cfg.weights.omega, f.omega);
    apply_if_set(cmd, "--gamma", cfg.weights.gamma, f.gamma);
    apply_if_set(cmd, "--seed-net1", cfg.seed_net1, f.seed_net1);
    apply_if_set(cmd, "--seed-net2", cfg.seed_net2, f.seed_net2);
    apply_if_set(cmd, "--seed-data-order", cfg.seed_data_order, f.seed_data_order);
    apply_if_set(cmd, "--stop-weak-gradient", cfg.stop_weak_gradient, f.stop_weak_gradient);
    apply_if_set(cmd, "--hidden-dims", cfg.hidden_dims, f.hidden_dims);
    apply_if_set(cmd, "--weak-sigma", cfg.aug.weak_sigma, f.weak_sigma);
    apply_if_set(cmd, "--strong-sigma", cfg.aug.strong_sigma, f.strong_sigma);
    apply_if_set(cmd, "--mask-prob", cfg.aug.mask_prob, f.mask_prob);
    apply_if_set(cmd, "--checkpoint-every", cfg.checkpoint_every, f.checkpoint_every);
    asmlab::validate(cfg);
}

asmlab::TrainConfig resolve_train_config(const std::string& config_path, const CLI::App* cmd,
                                         const TrainCliFlags& flags) {
    asmlab::TrainConfig cfg;
    if (!config_path.empty())
        cfg = asmlab::train_config_from_json(asmlab::load_config_file(config_path));
    merge_train_flags(cmd, flags, cfg);
    if (cfg.seed_net1 == cfg.seed_net2)
        log_info("warning: seed-net1 == seed-net2; identical initializations give the two "
                 "networks the same view and weaken co-training");
    return cfg;
}

// When --data is omitted but the config is a manifest, reuse its recorded
// dataset path.
std::string resolve_data_path(const std::string& data_flag, const std::string& config_path) {
    if (!data_flag.empty()) return data_flag;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (in) {
            json j;
            try {
                in >> j;
                if (j.contains("inputs") && j.at("inputs").contains("data"))
                    return j.at("inputs").at("data").get<std::string>();
            } catch (const json::exception&) {
            }
        }
    }
    throw asmlab::ConfigError("no dataset given: pass --data or a manifest with a data input");
}

json accuracy_json(const asmlab::AccuracyRecord& acc) {
    return {{"net1", acc.net1}, {"net2", acc.net2}, {"ensemble", acc.ensemble}};
}

json mining_json(const asmlab::MiningQuality& q) {
    return {{"precision", q.precision},
            {"recall", q.recall},
            {"noise_in_clean", q.noise_in_clean},
            {"noise_in_ambiguous", q.noise_in_ambiguous},
            {"noise_in_noisy", q.noise_in_noisy}};
}

int cmd_gen_data(const std::string& config_path, const std::string& out_path,
                 const CLI::App* cmd, const asmlab::DataGenConfig& flag_cfg) {
    asmlab::DataGenConfig cfg;
    if (!config_path.empty())
        cfg = asmlab::gen_config_from_json(asmlab::load_config_file(config_path));
    apply_if_set(cmd, "--k", cfg.k, flag_cfg.k);
    apply_if_set(cmd, "--d", cfg.d, flag_cfg.d);
    apply_if_set(cmd, "--n-per-class", cfg.n_per_class, flag_cfg.n_per_class);
    apply_if_set(cmd, "--n-test-per-class", cfg.n_test_per_class, flag_cfg.n_test_per_class);
    apply_if_set(cmd, "--separation", cfg.separation, flag_cfg.separation);
    apply_if_set(cmd, "--ambiguous-fraction", cfg.ambiguous_fraction,
                 flag_cfg.ambiguous_fraction);
    apply_if_set(cmd, "--noise-ratio", cfg.noise_ratio, flag_cfg.noise_ratio);
    apply_if_set(cmd, "--seed", cfg.seed, flag_cfg.seed);
    asmlab::validate(cfg);

    log_debug("generating dataset");
    const asmlab::NoisyDataset ds = asmlab::build_dataset(cfg);
    if (const fs::path parent = fs::path(out_path).parent_path(); !parent.empty())
        fs::create_directories(parent);
    asmlab::save_csv(ds, out_path);

    asmlab::RunManifest manifest;
    manifest.command = "gen-data";
    manifest.resolved_config = asmlab::to_json(cfg);
    manifest.outputs["data"] = out_path;
    manifest.artifact_hashes[out_path] = asmlab::fnv1a64_file(out_path);
    const std::string manifest_path = out_path + ".manifest.json";
    asmlab::write_manifest(manifest, manifest_path);
    log_info("wrote " + out_path + " (" + std::to_string(ds.size()) + " rows) and " +
             manifest_path);
    return 0;
}

int cmd_train(const std::string& config_path, const std::string& data_path,
              const std::string& out_dir, const CLI::App* cmd, const TrainCliFlags& flags,
              asmlab::Exec exec) {
    asmlab::TrainConfig cfg = resolve_train_config(config_path, cmd, flags);
    cfg.exec = exec;
    const asmlab::NoisyDataset ds = asmlab::load_csv(data_path);
    fs::create_directories(out_dir);

    const std::string metrics_path = (fs::path(out_dir) / "metrics.jsonl").string();
    const std::string summary_path = (fs::path(out_dir) / "summary.json").string();
    const std::string checkpoint_path = (fs::path(out_dir) / "checkpoint.json").string();
    std::ofstream metrics(metrics_path);
    if (!metrics) throw asmlab::ConfigError("cannot write " + metrics_path);

    std::vector<std::string> checkpoint_files;
    asmlab::TrainHooks hooks;
    hooks.on_epoch = [&](const asmlab::EpochReport& report) {
        metrics << asmlab::epoch_report_to_json(report) << "\n";
        log_debug("epoch " + std::to_string(report.epoch) + " ensemble acc " +
                  std::to_string(report.test_accuracy.ensemble));
    };
    hooks.on_checkpoint = [&](int epoch, const asmlab::DualNet& nets) {
        const bool final_epoch = epoch == cfg.epochs - 1;
        char name[64];
        std::snprintf(name, sizeof(name), "checkpoint_epoch_%04d.json", epoch);
        const std::string path =
            final_epoch ? checkpoint_path : (fs::path(out_dir) / name).string();
        write_text(path,
                   dual_checkpoint_json(nets, cfg.seed_net1, cfg.seed_net2, epoch).dump());
        checkpoint_files.push_back(path);
    };

    const asmlab::TrainResult result = asmlab::train(ds, cfg, hooks);
    metrics.close();

    json summary;
    summary["mode"] = result.mode;
    summary["epochs"] = cfg.epochs;
    summary["warmup_epochs"] = cfg.warmup_epochs;
    summary["last5_mean_accuracy"] = result.last5_mean_accuracy;
    summary["final_accuracy"] = accuracy_json(result.reports.back().test_accuracy);
    summary["subset_sizes"] = {{"clean", result.reports.back().n_clean},
                               {"ambiguous", result.reports.back().n_ambiguous},
                               {"noisy", result.reports.back().n_noisy}};
    if (result.reports.back().has_mining)
        summary["final_mining"] = mining_json(result.reports.back().mining);
    json trajectory = json::array();
    for (const auto& report : result.reports) {
        if (report.warmup) continue;
        trajectory.push_back(
            {{"epoch", report.epoch}, {"t_clean", report.t_clean}, {"t_noisy", report.t_noisy}});
    }
    summary["threshold_trajectory"] = trajectory;
    summary["seeds"] = {{"net1", cfg.seed_net1},
                        {"net2", cfg.seed_net2},
                        {"data_order", cfg.seed_data_order}};
    write_text(summary_path, summary.dump(2) + "\n");

    asmlab::RunManifest manifest;
    manifest.command = "train";
    manifest.resolved_config = asmlab::to_json(cfg);
    manifest.inputs["data"] = data_path;
    manifest.artifact_hashes[data_path] = asmlab::fnv1a64_file(data_path);
    manifest.outputs["metrics"] = metrics_path;
    manifest.outputs["summary"] = summary_path;
    for (const auto& path : checkpoint_files)
        manifest.outputs[fs::path(path).stem().string()] = path;
    for (const auto& path : {metrics_path, summary_path})
        manifest.artifact_hashes[path] = asmlab::fnv1a64_file(path);
    for (const auto& path : checkpoint_files)
        manifest.artifact_hashes[path] = asmlab::fnv1a64_file(path);
    asmlab::write_manifest(manifest, (fs::path(out_dir) / "manifest.json").string());

    log_info("mode " + result.mode + ", last-5 mean ensemble accuracy " +
             std::to_string(result.last5_mean_accuracy));
    return 0;
}

int cmd_audit(const std::string& config_path, std::string data_path,
              std::string checkpoint_path, const std::string& out_path, asmlab::Exec exec) {
    if (!config_path.empty() && (data_path.empty() || checkpoint_path.empty())) {
        std::ifstream in(config_path);
        if (!in) throw asmlab::ConfigError("cannot open config file: " + config_path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw asmlab::ParseError("config " + config_path + ": invalid JSON: " + e.what());
        }
        if (j.contains("inputs")) {
            const json& inputs = j.at("inputs");
            if (data_path.empty() && inputs.contains("data"))
                data_path = inputs.at("data").get<std::string>();
            if (checkpoint_path.empty() && inputs.contains("checkpoint"))
                checkpoint_path = inputs.at("checkpoint").get<std::string>();
        }
    }
    if (data_path.empty() || checkpoint_path.empty())
        throw asmlab::ConfigError(
            "audit: pass --data and --checkpoint, or a manifest recording them");
    const DualCheckpoint ck = load_dual_checkpoint(checkpoint_path);
    const int k = ck.net1.net.num_classes();
    const int d = ck.net1.net.input_dim();
    const asmlab::NoisyDataset ds = asmlab::load_csv(data_path, k);
    if (ds.dim != d)
        throw asmlab::ShapeError("audit: dataset has " + std::to_string(ds.dim) +
                                 " features but the checkpoint expects " + std::to_string(d));
    if (ck.net2.net.layer_dims != ck.net1.net.layer_dims)
        throw asmlab::ShapeError("audit: checkpoint networks disagree on architecture");

    const auto train_rows = ds.train_indices();
    const asmlab::EpochPredictions preds =
        asmlab::predict(ck.net1.net, ck.net2.net, ds, train_rows, exec);
    const asmlab::ThresholdTable table =
        asmlab::compute_thresholds(preds, k, asmlab::init_thresholds(k), ck.epoch);
    const asmlab::Partition part = asmlab::partition(preds, table);

    if (const fs::path parent = fs::path(out_path).parent_path(); !parent.empty())
        fs::create_directories(parent);
    std::ofstream out(out_path);
    if (!out) throw asmlab::ConfigError("cannot write " + out_path);
    out << "sample_id,given_label,confidence,subset,is_injected_noise\n";
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
        char conf[32];
        std::snprintf(conf, sizeof(conf), "%.17g", preds.confidence[i]);
        out << train_rows[i] << ',' << preds.given_label[i] << ',' << conf << ','
            << asmlab::subset_name(part.assignment[i]) << ','
            << static_cast<int>(ds.noise_mask[train_rows[i]]) << "\n";
    }
    out.close();

    asmlab::RunManifest manifest;
    manifest.command = "audit";
    manifest.resolved_config = {{"checkpoint_epoch", ck.epoch}};
    manifest.inputs["data"] = data_path;
    manifest.inputs["checkpoint"] = checkpoint_path;
    manifest.artifact_hashes[data_path] = asmlab::fnv1a64_file(data_path);
    manifest.artifact_hashes[checkpoint_path] = asmlab::fnv1a64_file(checkpoint_path);
    manifest.outputs["audit"] = out_path;
    manifest.artifact_hashes[out_path] = asmlab::fnv1a64_file(out_path);
    asmlab::write_manifest(manifest, out_path + ".manifest.json");

    log_info("audited " + std::to_string(train_rows.size()) + " training rows: " +
             std::to_string(part.clean.size()) + " clean, " +
             std::to_string(part.ambiguous.size()) + " ambiguous, " +
             std::to_string(part.noisy.size()) + " noisy");
    return 0;
}

int cmd_compare(const std::string& config_path, const std::string& data_path,
                const std::string& out_dir, const CLI::App* cmd, const TrainCliFlags& flags,
                std::vector<std::uint64_t> seeds, asmlab::Exec exec) {
    asmlab::TrainConfig cfg;
    if (!config_path.empty()) {
        json j = asmlab::load_config_file(config_path);
        if (j.contains("seeds") && cmd->count("--seeds") == 0)
            seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        j.erase("seeds");
        cfg = asmlab::train_config_from_json(j);
    }
    merge_train_flags(cmd, flags, cfg);
    cfg.exec = exec;
    if (seeds.empty()) throw asmlab::ConfigError("compare: --seeds must not be empty");

    const asmlab::NoisyDataset ds = asmlab::load_csv(data_path);
    fs::create_directories(out_dir);

    const asmlab::CompareResult result =
        asmlab::run_compare(ds, cfg, seeds, [](const asmlab::CompareSeedRecord& rec) {
            log_debug("seed " + std::to_string(rec.seed) + ": baseline " +
                      std::to_string(rec.baseline_accuracy) + ", asm " +
                      std::to_string(rec.asm_accuracy) + ", gap " + std::to_string(rec.gap));
        });

    json records = json::array();
    for (const auto& rec : result.per_seed) {
        json r = {{"seed", rec.seed},
                  {"seeds",
                   {{"net1", rec.seeds.net1},
                    {"net2", rec.seeds.net2},
                    {"data_order", rec.seeds.data_order}}},
                  {"baseline_accuracy", rec.baseline_accuracy},
                  {"asm_accuracy", rec.asm_accuracy},
                  {"gap", rec.gap}};
        if (rec.has_mining) r["final_mining"] = mining_json(rec.final_mining);
        records.push_back(r);
    }
    json summary;
    summary["per_seed"] = records;
    summary["aggregate"] = {{"n_seeds", result.per_seed.size()},
                            {"mean_baseline", result.mean_baseline},
                            {"std_baseline", result.std_baseline},
                            {"mean_asm", result.mean_asm},
                            {"std_asm", result.std_asm},
                            {"mean_gap", result.mean_gap},
                            {"std_gap", result.std_gap},
                            {"positive_gap_seeds", result.positive_gap_seeds}};
    const std::string summary_path = (fs::path(out_dir) / "compare_summary.json").string();
    write_text(summary_path, summary.dump(2) + "\n");

    asmlab::RunManifest manifest;
    manifest.command = "compare";
    manifest.resolved_config = asmlab::to_json(cfg);
    manifest.resolved_config["seeds"] = seeds;
    manifest.inputs["data"] = data_path;
    manifest.artifact_hashes[data_path] = asmlab::fnv1a64_file(data_path);
    manifest.outputs["summary"] = summary_path;
    manifest.artifact_hashes[summary_path] = asmlab::fnv1a64_file(summary_path);
    asmlab::write_manifest(manifest, (fs::path(out_dir) / "manifest.json").string());

    log_info("mean gap (asm - baseline): " + std::to_string(result.mean_gap) + " over " +
             std::to_string(result.per_seed.size()) + " seeds");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive sample mining lab"};
    app.require_subcommand(1);

    int threads = 0;
    bool serial = false;
    app.add_option("--threads", threads, "worker threads for evaluation/gradient passes");
    app.add_flag("--serial", serial, "disable parallel execution");

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "generate a synthetic noisy dataset (CSV)");
    std::string gen_config, gen_out = "data.csv";
    asmlab::DataGenConfig gen_flags;
    gen->add_option("--config", gen_config, "generation config JSON (or a prior manifest)");
    gen->add_option("--out", gen_out, "output CSV path");
    gen->add_option("--k", gen_flags.k, "number of classes");
    gen->add_option("--d", gen_flags.d, "feature dimension");
    gen->add_option("--n-per-class", gen_flags.n_per_class, "training samples per class");
    gen->add_option("--n-test-per-class", gen_flags.n_test_per_class, "test samples per class");
    gen->add_option("--separation", gen_flags.separation, "pairwise center distance");
    gen->add_option("--ambiguous-fraction", gen_flags.ambiguous_fraction,
                    "fraction drawn near decision boundaries");
    gen->add_option("--noise-ratio", gen_flags.noise_ratio, "symmetric label noise ratio");
    gen->add_option("--seed", gen_flags.seed, "generation seed");

    // train
    auto* tr = app.add_subcommand("train", "run ASM training on a dataset");
    std::string tr_config, tr_data, tr_out = "run";
    TrainCliFlags tr_flags;
    tr->add_option("--config", tr_config, "train config JSON (or a prior manifest)");
    tr->add_option("--data", tr_data, "dataset CSV");
    tr->add_option("--out", tr_out, "output directory");
    add_train_flags(tr, tr_flags);

    // audit
    auto* au = app.add_subcommand("audit", "partition a dataset with a trained checkpoint");
    std::string au_config, au_data, au_checkpoint, au_out = "audit.csv";
    au->add_option("--config", au_config, "a prior audit manifest to rerun");
    au->add_option("--data", au_data, "dataset CSV");
    au->add_option("--checkpoint", au_checkpoint, "dual-network checkpoint JSON");
    au->add_option("--out", au_out, "output CSV path");

    // compare
    auto* cp = app.add_subcommand("compare", "paired baseline-vs-ASM runs over a seed list");
    std::string cp_config, cp_data, cp_out = "compare";
    TrainCliFlags cp_flags;
    std::vector<std::uint64_t> cp_seeds = {1, 2, 3, 4, 5};
    cp->add_option("--config", cp_config, "train config JSON (or a prior manifest)");
    cp->add_option("--data", cp_data, "dataset CSV");
    cp->add_option("--out", cp_out, "output directory");
    cp->add_option("--seeds", cp_seeds, "seed list")->delimiter(',');
    add_train_flags(cp, cp_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    asmlab::set_threads(threads);
    const asmlab::Exec exec = serial ? asmlab::Exec::Serial : asmlab::Exec::Parallel;

    try {
        if (gen->parsed()) return cmd_gen_data(gen_config, gen_out, gen, gen_flags);
        if (tr->parsed()) {
            const std::string data = resolve_data_path(tr_data, tr_config);
            return cmd_train(tr_config, data, tr_out, tr, tr_flags, exec);
        }
        if (au->parsed()) return cmd_audit(au_config, au_data, au_checkpoint, au_out, exec);
        if (cp->parsed()) {
            const std::string data = resolve_data_path(cp_data, cp_config);
            return cmd_compare(cp_config, data, cp_out, cp, cp_flags, cp_seeds, exec);
        }
    } catch (const asmlab::NumericFault& e) {
        std::cerr << "numeric fault: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
