#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "json.hpp"

#include "asmlab/dataset.hpp"
#include "asmlab/trainer.hpp"

namespace asmlab {

// FNV-1a over the file bytes, hex encoded. Used for artifact hashes in
// manifests and for the determinism checks.
std::string fnv1a64_file(const std::string& path);
std::string fnv1a64_bytes(const std::string& bytes);

// Every CLI command writes one of these next to its outputs. The resolved
// config has all defaults materialized, so the manifest alone reproduces
// the run: any command accepts a manifest wherever it accepts a config.
struct RunManifest {
    std::string command;
    nlohmann::json resolved_config;
    std::map<std::string, std::string> inputs;
    std::map<std::string, std::string> outputs;
    std::map<std::string, std::string> artifact_hashes;  // output path -> fnv1a64
};

void write_manifest(const RunManifest& manifest, const std::string& path);

// Reads a JSON config file. A manifest is accepted too: its
// resolved_config is returned. A missing path throws ConfigError; invalid
// JSON throws ParseError.
nlohmann::json load_config_file(const std::string& path);

// Config <-> JSON with field-level errors on unknown keys or bad types.
nlohmann::json to_json(const DataGenConfig& cfg);
DataGenConfig gen_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

}  // namespace asmlab
