#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qtime {

/// Prediction hook for attribution: the model's output for sample `index`
/// with its global feature vector replaced by `global` (graph branch and any
/// normalization held fixed inside the closure).
using GlobalPredictFn = std::function<double(size_t index, const std::vector<double>& global)>;

/// Monte Carlo permutation-sampling Shapley attributions against a fixed
/// baseline vector. Per sample, attributions over all permutations telescope,
/// so their sum equals prediction(sample) - prediction(baseline) exactly.
/// Deterministic under the seed: each sample draws its permutations from a
/// seed derived from (seed, sample index), so per-sample work may run in
/// parallel.
std::vector<std::vector<double>> shap_values(const GlobalPredictFn& predict,
                                             const std::vector<std::vector<double>>& globals,
                                             const std::vector<double>& baseline,
                                             int n_permutations, uint64_t seed);

struct ImportanceReport {
    std::vector<double> mean_abs;    // per feature, over all samples
    std::vector<size_t> ranking;     // feature indices, descending mean_abs
    std::vector<std::string> names;  // parallel to mean_abs
};

ImportanceReport shap_importance(const GlobalPredictFn& predict,
                                 const std::vector<std::vector<double>>& globals,
                                 const std::vector<double>& baseline,
                                 const std::vector<std::string>& feature_names,
                                 int n_permutations, uint64_t seed);

}  // namespace qtime
