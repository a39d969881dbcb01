#pragma once

#include <cstdint>
#include <string>

#include "qtime/train.hpp"

namespace qtime {

/// Project-wide configuration loaded from a JSON file. Relative paths resolve
/// against the config file's directory. The single seed feeds every command
/// through documented per-command derivations, and the semantic hash (paths
/// excluded) is stamped into every artifact header.
struct ProjectConfig {
    std::string registry_global_path;
    std::string registry_node_path;
    std::string corpus_dir;
    std::string calibration_dir;
    std::string manifest_path;
    std::string artifact_dir;
    std::string model_path;

    uint64_t seed = 42;
    std::string target_space = "log_seconds";
    double alpha = 0.5;  // GSx blend weight
    int shap_permutations = 20;
    double repeats_precision_percent = 25.0;
    double repeats_z = 1.960;

    int epochs = 500;
    int batch_size = 128;
    double learning_rate = 1e-3;

    static ProjectConfig load(const std::string& path);

    TrainConfig train_config() const;

    /// Hash of the semantically relevant fields (seed, hyperparameters,
    /// spaces, weights) -- never paths, so runs into different directories
    /// produce byte-identical artifacts.
    uint64_t semantic_hash() const;
};

}  // namespace qtime
