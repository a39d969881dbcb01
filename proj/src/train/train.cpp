#include "qtime/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qtime/errors.hpp"
#include "qtime/hash.hpp"
#include "qtime/parallel.hpp"
#include "qtime/rng.hpp"

namespace qtime {
namespace {

double to_target_space(double seconds, TargetSpace space) {
    if (space == TargetSpace::Seconds) return seconds;
    if (!(seconds > 0)) throw ContractError("log target space requires positive times");
    return std::log(seconds);
}

/// Owns the normalized copies of every sample's features; ModelInputs point
/// into this storage.
struct PreparedData {
    std::vector<NodeFeatureMatrix> nodes;
    std::vector<std::vector<double>> globals;
    std::vector<const std::vector<std::pair<int, int>>*> adjacency;
    std::vector<double> targets;
    FeatureScalers scalers;

    ModelInput input(size_t i) const {
        ModelInput in;
        in.nodes = &nodes[i];
        in.adjacency = adjacency[i];
        in.global = &globals[i];
        return in;
    }
};

PreparedData prepare(const std::vector<LabeledSample>& samples,
                     const std::vector<size_t>& train_idx, const ModelConfig& mc,
                     TargetSpace space) {
    if (samples.empty()) throw ContractError("train: no samples");
    const size_t node_cols = static_cast<size_t>(mc.node_dim);
    const size_t global_cols = static_cast<size_t>(mc.global_dim);

    PreparedData data;
    data.scalers.node.mins.assign(node_cols, std::numeric_limits<double>::infinity());
    data.scalers.node.maxs.assign(node_cols, -std::numeric_limits<double>::infinity());
    data.scalers.global.mins.assign(global_cols, std::numeric_limits<double>::infinity());
    data.scalers.global.maxs.assign(global_cols, -std::numeric_limits<double>::infinity());

    for (size_t i : train_idx) {
        const LabeledSample& s = samples[i];
        if (s.graph.node_features.cols != node_cols || s.global.size() != global_cols)
            throw ContractError("train: sample feature dimensions do not match model config");
        accumulate_minmax(data.scalers.node, s.graph.node_features.data, node_cols);
        accumulate_minmax(data.scalers.global, s.global, global_cols);
    }

    data.nodes.reserve(samples.size());
    data.globals.reserve(samples.size());
    data.adjacency.reserve(samples.size());
    data.targets.reserve(samples.size());
    for (const LabeledSample& s : samples) {
        if (s.graph.node_features.cols != node_cols || s.global.size() != global_cols)
            throw ContractError("train: sample feature dimensions do not match model config");
        NodeFeatureMatrix m = s.graph.node_features;
        apply_minmax(std::span<double>(m.data), node_cols, data.scalers.node);
        data.nodes.push_back(std::move(m));
        std::vector<double> g = s.global;
        apply_minmax(std::span<double>(g), global_cols, data.scalers.global);
        data.globals.push_back(std::move(g));
        data.adjacency.push_back(&s.graph.adjacency);
        data.targets.push_back(to_target_space(s.target_seconds, space));
    }
    return data;
}

/// MSE of the current params over an index set; forward passes run in
/// parallel into per-sample slots.
double evaluate_mse(const Model& model, const ModelParams& params, const PreparedData& data,
                    const std::vector<size_t>& idx) {
    std::vector<double> errs(idx.size(), 0.0);
    parallel_for(idx.size(), [&](size_t j) {
        const size_t s = idx[j];
        double pred = model.forward(params, data.input(s));
        double e = pred - data.targets[s];
        errs[j] = e * e;
    });
    double sum = 0;
    for (double e : errs) sum += e;
    return sum / static_cast<double>(idx.size());
}

struct Adam {
    std::vector<double> m, v;
    long t = 0;

    explicit Adam(size_t n) : m(n, 0.0), v(n, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grad, const TrainConfig& tc) {
        ++t;
        const double b1 = tc.adam_beta1;
        const double b2 = tc.adam_beta2;
        const double corr1 = 1.0 - std::pow(b1, static_cast<double>(t));
        const double corr2 = 1.0 - std::pow(b2, static_cast<double>(t));
        const double lr = tc.learning_rate;
        for (size_t i = 0; i < params.size(); ++i) {
            m[i] = b1 * m[i] + (1.0 - b1) * grad[i];
            v[i] = b2 * v[i] + (1.0 - b2) * grad[i] * grad[i];
            double mhat = m[i] / corr1;
            double vhat = v[i] / corr2;
            params[i] -= lr * mhat / (std::sqrt(vhat) + tc.adam_eps);
        }
    }
};

}  // namespace

TrainOutcome train(const std::vector<LabeledSample>& samples, const TrainConfig& tc,
                   const ModelConfig& mc, const ModelParams* init, const TrainTestSplit* split) {
    if (tc.epochs < 1 || tc.batch_size < 1)
        throw ContractError("train: epochs and batch size must be positive");

    TrainTestSplit derived;
    if (split == nullptr) {
        derived = split_train_test(samples.size(), derive_seed(tc.seed, "train.split"));
        split = &derived;
    }
    if (split->train.empty() || split->test.empty())
        throw ContractError("train: split has an empty side");

    const Model model(mc);
    PreparedData data = prepare(samples, split->train, mc, tc.space);

    ModelParams params = init != nullptr ? *init : model.init_params();
    if (params.flat.size() != model.shape().total)
        throw ContractError("train: initial parameters do not match model config");

    TrainOutcome out;
    out.report.initial_test_mse = evaluate_mse(model, params, data, split->test);
    out.report.best_epoch = 0;
    out.report.best_test_mse = out.report.initial_test_mse;
    ModelParams best = params;

    Adam adam(params.flat.size());
    Rng shuffle_rng(derive_seed(tc.seed, "train.shuffle"));
    std::vector<size_t> order = split->train;
    std::vector<double> grad;
    std::vector<ModelInput> batch_inputs;
    std::vector<double> batch_targets;

    for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_sse = 0;
        try {
            for (size_t base = 0; base < order.size();
                 base += static_cast<size_t>(tc.batch_size)) {
                const size_t count =
                    std::min(static_cast<size_t>(tc.batch_size), order.size() - base);
                batch_inputs.clear();
                batch_targets.clear();
                for (size_t j = 0; j < count; ++j) {
                    batch_inputs.push_back(data.input(order[base + j]));
                    batch_targets.push_back(data.targets[order[base + j]]);
                }
                double batch_mse = model.loss_and_grad(params, batch_inputs, batch_targets, grad);
                epoch_sse += batch_mse * static_cast<double>(count);
                adam.step(params.flat, grad, tc);
            }
        } catch (const DivergenceError& e) {
            out.report.diverged = true;
            out.report.divergence_note =
                "epoch " + std::to_string(epoch) + ": " + e.what();
            break;
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_mse = epoch_sse / static_cast<double>(order.size());
        rec.test_mse = evaluate_mse(model, params, data, split->test);
        out.report.epochs.push_back(rec);

        if (rec.test_mse < out.report.best_test_mse) {
            out.report.best_test_mse = rec.test_mse;
            out.report.best_epoch = epoch;
            best = params;
        }
    }

    out.bundle.config = mc;
    out.bundle.params = std::move(best);
    out.bundle.scalers = std::move(data.scalers);
    out.bundle.space = tc.space;
    return out;
}

CvReport fine_tune_cv(const ModelBundle& pretrained, const std::vector<LabeledSample>& samples,
                      size_t k, const TrainConfig& tc) {
    auto folds = kfold(samples.size(), k, derive_seed(tc.seed, "cv.folds"));

    CvReport report;
    for (size_t f = 0; f < folds.size(); ++f) {
        TrainTestSplit split{folds[f].train, folds[f].test};
        TrainConfig fold_tc = tc;
        fold_tc.seed = derive_seed(tc.seed, "cv.fold." + std::to_string(f));
        fold_tc.space = pretrained.space;

        TrainOutcome outcome;
        try {
            outcome = train(samples, fold_tc, pretrained.config, &pretrained.params, &split);
        } catch (const Error& e) {
            throw Error("fold " + std::to_string(f) + " failed: " + e.what());
        }
        if (outcome.report.diverged)
            throw Error("fold " + std::to_string(f) +
                        " diverged: " + outcome.report.divergence_note);

        // Fold metrics on its test part with the best snapshot, in the
        // modeling space, under the same normalization the fold trained with.
        const Model model(pretrained.config);
        PreparedData data = prepare(samples, split.train, pretrained.config, fold_tc.space);
        double sse = 0, sst = 0, mean = 0;
        for (size_t i : split.test) mean += data.targets[i];
        mean /= static_cast<double>(split.test.size());
        for (size_t i : split.test) {
            double pred = model.forward(outcome.bundle.params, data.input(i));
            sse += (pred - data.targets[i]) * (pred - data.targets[i]);
            sst += (data.targets[i] - mean) * (data.targets[i] - mean);
        }

        FoldResult fr;
        fr.fold = f;
        fr.best_mse = outcome.report.best_test_mse;
        fr.best_epoch = outcome.report.best_epoch;
        fr.nmse = sst > 0 ? sse / sst : 0.0;
        fr.r_squared = sst > 0 ? 1.0 - sse / sst : 0.0;
        report.folds.push_back(fr);
    }

    for (const FoldResult& fr : report.folds) {
        report.mean_best_mse += fr.best_mse;
        report.mean_r_squared += fr.r_squared;
        report.mean_nmse += fr.nmse;
    }
    const double inv = 1.0 / static_cast<double>(report.folds.size());
    report.mean_best_mse *= inv;
    report.mean_r_squared *= inv;
    report.mean_nmse *= inv;
    return report;
}

GridResult grid_search(const GridSpec& grid, const std::vector<LabeledSample>& samples,
                       const TrainConfig& base, const ModelConfig& mc, size_t budget) {
    std::vector<double> lrs = grid.learning_rates.empty()
                                  ? std::vector<double>{base.learning_rate}
                                  : grid.learning_rates;
    std::vector<int> eps = grid.epochs.empty() ? std::vector<int>{base.epochs} : grid.epochs;
    std::vector<int> bss =
        grid.batch_sizes.empty() ? std::vector<int>{base.batch_size} : grid.batch_sizes;

    const size_t total = lrs.size() * eps.size() * bss.size();
    if (total == 0) throw ContractError("grid_search: empty grid");
    if (total > budget)
        throw ContractError("grid_search: grid of " + std::to_string(total) +
                            " runs exceeds budget " + std::to_string(budget));

    // One split shared by every candidate so MSEs are comparable.
    TrainTestSplit split =
        split_train_test(samples.size(), derive_seed(base.seed, "grid.split"));

    GridResult result;
    result.best_test_mse = std::numeric_limits<double>::infinity();
    for (double lr : lrs) {
        for (int ep : eps) {
            for (int bs : bss) {
                TrainConfig tc = base;
                tc.learning_rate = lr;
                tc.epochs = ep;
                tc.batch_size = bs;
                TrainOutcome outcome = train(samples, tc, mc, nullptr, &split);
                ++result.runs;
                if (!outcome.report.diverged &&
                    outcome.report.best_test_mse < result.best_test_mse) {
                    result.best_test_mse = outcome.report.best_test_mse;
                    result.best = tc;
                }
            }
        }
    }
    if (!std::isfinite(result.best_test_mse))
        throw Error("grid_search: every candidate diverged");
    return result;
}

}  // namespace qtime
