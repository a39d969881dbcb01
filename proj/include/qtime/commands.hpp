#pragma once

#include <cstddef>
#include <string>

#include "qtime/project_config.hpp"

namespace qtime {

/// Pipeline commands behind the CLI subcommands. Each one writes its
/// artifacts under cfg.artifact_dir with a provenance header (config hash,
/// seed, input hashes) and is byte-identical across reruns with identical
/// inputs and seed. All of them throw qtime::Error subclasses on user errors.

/// Parses every corpus circuit, writes the global feature table and the
/// per-backend graph archive; unparseable files are logged and skipped.
void cmd_extract(const ProjectConfig& cfg);

/// GSx selection of k circuit-on-backend pairs from the extracted pool.
void cmd_sample(const ProjectConfig& cfg, size_t k);

/// Trains on manifest-labeled samples with a 9:1 split; writes the weight
/// container, the per-epoch report and the split id lists.
void cmd_train(const ProjectConfig& cfg);

/// Pretrain/fine-tune protocol: k-fold CV starting from saved weights.
void cmd_finetune(const ProjectConfig& cfg, const std::string& pretrained_path, size_t k_folds);

/// Predicts execution seconds for every extracted circuit-on-backend pair.
void cmd_predict(const ProjectConfig& cfg);

/// Joins predictions with the manifest and reports R^2/MSE/NMSE in the
/// modeling space.
void cmd_evaluate(const ProjectConfig& cfg, const std::string& predictions_path);

/// SHAP-style importance ranking of the global features.
void cmd_importance(const ProjectConfig& cfg);

/// Per-record minimum-repeat counts from the manifest.
void cmd_repeats(const ProjectConfig& cfg);

}  // namespace qtime
