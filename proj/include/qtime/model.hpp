#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qtime/errors.hpp"
#include "qtime/node_features.hpp"
#include "qtime/scaling.hpp"

namespace qtime {

/// Thrown when a loss or activation goes non-finite; signals divergence.
class DivergenceError : public Error {
  public:
    explicit DivergenceError(const std::string& what) : Error(what) {}
};

/// Architecture of the execution-time regressor: a graph branch (stacked
/// graph-transformer layers + global average pooling) and a global branch
/// (two rectified FC layers), concatenated into a four-layer FC head with a
/// scalar output. Defaults give the 178 + 64 = 242 concatenation width.
struct ModelConfig {
    int node_dim = kNodeFeatureDim;  // 178
    int global_dim = 41;
    int gt_layers = 3;
    int gt_hidden = kNodeFeatureDim;  // width preserved so pooling yields 1 x 178
    std::vector<int> global_fc_dims = {64, 64};
    std::vector<int> head_dims = {128, 64, 32, 1};
    uint64_t seed = 1;

    int concat_dim() const { return gt_hidden + global_fc_dims.back(); }
    bool operator==(const ModelConfig&) const = default;
};

struct TensorSpec {
    std::string name;
    size_t rows = 0;  // weights are stored (in_dim x out_dim); biases (1 x out_dim)
    size_t cols = 0;
    size_t offset = 0;  // into the flat parameter vector
    bool is_bias = false;

    size_t size() const { return rows * cols; }
};

/// Flat parameter layout derived from a ModelConfig; tensor order is fixed and
/// the layout is identical across runs for a given config.
struct ModelShape {
    std::vector<TensorSpec> tensors;
    size_t total = 0;

    const TensorSpec& find(const std::string& name) const;
};

struct ModelParams {
    std::vector<double> flat;
};

/// Normalized features of one sample as consumed by forward/backward.
struct ModelInput {
    const NodeFeatureMatrix* nodes = nullptr;
    const std::vector<std::pair<int, int>>* adjacency = nullptr;
    const std::vector<double>* global = nullptr;
};

/// All intermediate activations of one forward pass; consumed by backward and
/// inspected by tests (attention weights in particular).
struct ForwardTrace {
    struct Layer {
        std::vector<double> q, k, v;         // n x d, row-major
        std::vector<std::vector<double>> attn;  // per node, over its neighbor list
        std::vector<double> z;               // n x d, attention mix
        std::vector<double> pre;             // n x d, pre-activation
        std::vector<double> out;             // n x d, rectified
    };
    std::vector<std::vector<int>> neighbors;  // in-neighbors in edge order, then self
    std::vector<Layer> layers;
    std::vector<double> pooled;              // gt_hidden
    std::vector<std::vector<double>> global_pre;
    std::vector<std::vector<double>> global_out;
    std::vector<double> concat;
    std::vector<std::vector<double>> head_pre;
    std::vector<std::vector<double>> head_out;
    double output = 0;
};

class Model {
  public:
    explicit Model(ModelConfig config);

    const ModelConfig& config() const { return config_; }
    const ModelShape& shape() const { return shape_; }

    /// Glorot-uniform weights, zero biases, deterministic under config.seed.
    ModelParams init_params() const;

    double forward(const ModelParams& params, const ModelInput& input) const;
    ForwardTrace forward_trace(const ModelParams& params, const ModelInput& input) const;

    /// Runs only the global branch and head against a precomputed pooled
    /// graph vector; the attribution path re-evaluates the model many times
    /// per sample with the graph branch held fixed.
    double forward_with_pooled(const ModelParams& params, std::span<const double> pooled,
                               const std::vector<double>& global) const;

    /// Accumulates d(output * upstream)/d(params) into `grad` (same layout as
    /// the flat parameter vector). `trace` must come from the same input.
    void backward(const ModelParams& params, const ModelInput& input, const ForwardTrace& trace,
                  double upstream, std::span<double> grad) const;

    /// Mean squared error over the batch plus exact gradients. Throws
    /// ContractError on an empty batch and DivergenceError on non-finite loss.
    /// Per-sample gradients are computed in parallel but always reduced in
    /// sample order, so results do not depend on the thread count.
    double loss_and_grad(const ModelParams& params, std::span<const ModelInput> batch,
                         std::span<const double> targets, std::vector<double>& grad) const;

  private:
    void check_input(const ModelInput& input) const;

    ModelConfig config_;
    ModelShape shape_;
};

/// Fitted feature normalization carried with the trained weights.
struct FeatureScalers {
    MinMaxRanges node;
    MinMaxRanges global;
};

enum class TargetSpace { LogSeconds, Seconds };

const char* target_space_name(TargetSpace s);
TargetSpace parse_target_space(const std::string& name);

/// Everything needed to predict: architecture, weights, scalers, target space.
struct ModelBundle {
    ModelConfig config;
    ModelParams params;
    FeatureScalers scalers;
    TargetSpace space = TargetSpace::LogSeconds;
};

/// Normalizes a raw sample with the bundle's scalers and runs the model;
/// returns predicted seconds (inverse-transformed out of log space).
double predict_seconds(const ModelBundle& bundle, const GraphSample& sample,
                       const std::vector<double>& global_vector);

}  // namespace qtime
