#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtime/model.hpp"
#include "qtime/samples.hpp"
#include "qtime/splits.hpp"

namespace qtime {

struct TrainConfig {
    int epochs = 500;
    int batch_size = 128;
    double learning_rate = 1e-3;  // Adam step size
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    uint64_t seed = 1;
    TargetSpace space = TargetSpace::LogSeconds;
};

struct EpochRecord {
    int epoch = 0;  // 1-based
    double train_mse = 0;
    double test_mse = 0;
};

/// best_epoch 0 refers to the initial parameters (relevant when fine-tuning
/// from weights that no epoch improves on).
struct TrainReport {
    double initial_test_mse = 0;
    std::vector<EpochRecord> epochs;
    int best_epoch = 0;
    double best_test_mse = 0;
    bool diverged = false;
    std::string divergence_note;
};

struct TrainOutcome {
    ModelBundle bundle;  // best-snapshot weights + the scalers fitted on train
    TrainReport report;
};

/// Trains with mini-batch Adam on MSE in the configured target space.
/// Feature scaling ranges are fitted on the training rows only, then applied
/// to every sample. The best-test-MSE snapshot is returned, never the final
/// epoch unless it is the minimum. Fully deterministic under the seed; when
/// `split` is omitted a 9:1 split is derived from it.
TrainOutcome train(const std::vector<LabeledSample>& samples, const TrainConfig& train_config,
                   const ModelConfig& model_config, const ModelParams* init = nullptr,
                   const TrainTestSplit* split = nullptr);

struct FoldResult {
    size_t fold = 0;
    double best_mse = 0;
    double r_squared = 0;
    double nmse = 0;
    int best_epoch = 0;
};

struct CvReport {
    std::vector<FoldResult> folds;
    double mean_best_mse = 0;
    double mean_r_squared = 0;
    double mean_nmse = 0;
};

/// Fine-tuning protocol: per fold, initialize from the pretrained weights,
/// train on the other k-1 folds, track the best test MSE, then average the
/// per-fold bests. All parameters are updated (no freezing).
CvReport fine_tune_cv(const ModelBundle& pretrained, const std::vector<LabeledSample>& samples,
                      size_t k, const TrainConfig& train_config);

/// Candidate values per hyperparameter; an empty list keeps the base value.
struct GridSpec {
    std::vector<double> learning_rates;
    std::vector<int> epochs;
    std::vector<int> batch_sizes;
};

struct GridResult {
    TrainConfig best;
    double best_test_mse = 0;
    size_t runs = 0;
};

/// Exhaustive search over the cartesian grid, evaluated by held-out MSE on a
/// 9:1 split shared across candidates. Enumeration order (ties break to the
/// earlier candidate): learning rate, then epochs, then batch size. Refuses
/// to start when the grid exceeds `budget` runs.
GridResult grid_search(const GridSpec& grid, const std::vector<LabeledSample>& samples,
                       const TrainConfig& base, const ModelConfig& model_config, size_t budget);

}  // namespace qtime
