#include "qtime/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qtime/kernels.hpp"
#include "qtime/parallel.hpp"
#include "qtime/rng.hpp"

namespace qtime {
namespace {

namespace kn = qtime::kernels;

bool total_less(double a, double b) {
    if (std::isnan(b)) return !std::isnan(a);
    if (std::isnan(a)) return false;
    return a < b;
}

/// Per-dimension sorted accumulation makes the pooled mean independent of the
/// node storage order, so a consistent relabeling of the graph leaves the
/// output bit-identical.
void pooled_mean_sorted(const std::vector<double>& rows, size_t n, size_t d,
                        std::vector<double>& out) {
    out.assign(d, 0.0);
    std::vector<double> column(n);
    const double inv = 1.0 / static_cast<double>(n);
    for (size_t c = 0; c < d; ++c) {
        for (size_t r = 0; r < n; ++r) column[r] = rows[r * d + c];
        std::sort(column.begin(), column.end(), total_less);
        double sum = 0;
        for (double v : column) sum += v;
        out[c] = sum * inv;
    }
}

void broadcast_bias(std::vector<double>& m, size_t n, size_t d, const double* bias) {
    m.assign(n * d, 0.0);
    for (size_t r = 0; r < n; ++r) {
        std::copy(bias, bias + d, m.data() + r * d);
    }
}

void column_sum_acc(double* out, const std::vector<double>& m, size_t n, size_t d) {
    for (size_t r = 0; r < n; ++r) kn::add(out, m.data() + r * d, d);
}

}  // namespace

const TensorSpec& ModelShape::find(const std::string& name) const {
    for (const TensorSpec& t : tensors) {
        if (t.name == name) return t;
    }
    throw ContractError("unknown tensor '" + name + "'");
}

Model::Model(ModelConfig config) : config_(std::move(config)) {
    if (config_.node_dim < 1 || config_.global_dim < 1 || config_.gt_hidden < 1 ||
        config_.gt_layers < 1)
        throw ContractError("model config: dimensions must be positive");
    if (config_.global_fc_dims.empty() || config_.head_dims.empty())
        throw ContractError("model config: branch layer lists must be nonempty");
    for (int d : config_.global_fc_dims) {
        if (d < 1) throw ContractError("model config: bad global fc width");
    }
    for (int d : config_.head_dims) {
        if (d < 1) throw ContractError("model config: bad head width");
    }
    if (config_.head_dims.back() != 1)
        throw ContractError("model config: head must end in a scalar output");

    auto push = [this](const std::string& name, size_t rows, size_t cols, bool is_bias = false) {
        TensorSpec t;
        t.name = name;
        t.rows = rows;
        t.cols = cols;
        t.offset = shape_.total;
        t.is_bias = is_bias;
        shape_.total += t.size();
        shape_.tensors.push_back(std::move(t));
    };

    const size_t d = static_cast<size_t>(config_.gt_hidden);
    for (int l = 0; l < config_.gt_layers; ++l) {
        const size_t din = l == 0 ? static_cast<size_t>(config_.node_dim) : d;
        const std::string p = "gt" + std::to_string(l) + ".";
        push(p + "wq", din, d);
        push(p + "bq", 1, d, true);
        push(p + "wk", din, d);
        push(p + "bk", 1, d, true);
        push(p + "wv", din, d);
        push(p + "bv", 1, d, true);
        push(p + "wo", d, d);
        push(p + "bo", 1, d, true);
    }
    size_t gin = static_cast<size_t>(config_.global_dim);
    for (size_t j = 0; j < config_.global_fc_dims.size(); ++j) {
        size_t gout = static_cast<size_t>(config_.global_fc_dims[j]);
        const std::string p = "global" + std::to_string(j) + ".";
        push(p + "w", gin, gout);
        push(p + "b", 1, gout, true);
        gin = gout;
    }
    size_t hin = static_cast<size_t>(config_.concat_dim());
    for (size_t j = 0; j < config_.head_dims.size(); ++j) {
        size_t hout = static_cast<size_t>(config_.head_dims[j]);
        const std::string p = "head" + std::to_string(j) + ".";
        push(p + "w", hin, hout);
        push(p + "b", 1, hout, true);
        hin = hout;
    }
}

ModelParams Model::init_params() const {
    ModelParams params;
    params.flat.assign(shape_.total, 0.0);
    Rng rng(config_.seed);
    for (const TensorSpec& t : shape_.tensors) {
        if (t.is_bias) continue;  // biases stay 0
        double limit = std::sqrt(6.0 / static_cast<double>(t.rows + t.cols));
        double* p = params.flat.data() + t.offset;
        for (size_t i = 0; i < t.size(); ++i) p[i] = rng.uniform(-limit, limit);
    }
    return params;
}

void Model::check_input(const ModelInput& input) const {
    if (input.nodes == nullptr || input.adjacency == nullptr || input.global == nullptr)
        throw ContractError("model input: missing component");
    if (input.nodes->rows == 0) throw ContractError("model input: empty graph");
    if (input.nodes->cols != static_cast<size_t>(config_.node_dim))
        throw ContractError("model input: node feature width mismatch");
    if (input.global->size() != static_cast<size_t>(config_.global_dim))
        throw ContractError("model input: global feature width mismatch");
    const int n = static_cast<int>(input.nodes->rows);
    for (const auto& [src, dst] : *input.adjacency) {
        if (src < 0 || dst < 0 || src >= n || dst >= n)
            throw ContractError("model input: adjacency index out of range");
    }
    for (double v : input.nodes->data) {
        if (!std::isfinite(v)) throw ContractError("model input: non-finite node feature");
    }
    for (double v : *input.global) {
        if (!std::isfinite(v)) throw ContractError("model input: non-finite global feature");
    }
}

ForwardTrace Model::forward_trace(const ModelParams& params, const ModelInput& input) const {
    check_input(input);
    if (params.flat.size() != shape_.total) throw ContractError("parameter vector size mismatch");

    const size_t n = input.nodes->rows;
    const size_t d = static_cast<size_t>(config_.gt_hidden);

    ForwardTrace trace;
    trace.neighbors.assign(n, {});
    for (const auto& [src, dst] : *input.adjacency) {
        trace.neighbors[static_cast<size_t>(dst)].push_back(src);
    }
    for (size_t i = 0; i < n; ++i) trace.neighbors[i].push_back(static_cast<int>(i));

    const double* flat = params.flat.data();
    auto tensor = [&](const std::string& name) {
        return flat + shape_.find(name).offset;
    };

    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    const std::vector<double>* h = &input.nodes->data;
    size_t din = static_cast<size_t>(config_.node_dim);

    trace.layers.resize(static_cast<size_t>(config_.gt_layers));
    for (int l = 0; l < config_.gt_layers; ++l) {
        auto& layer = trace.layers[static_cast<size_t>(l)];
        const std::string p = "gt" + std::to_string(l) + ".";

        broadcast_bias(layer.q, n, d, tensor(p + "bq"));
        kn::gemm_acc(layer.q.data(), h->data(), tensor(p + "wq"), n, din, d);
        broadcast_bias(layer.k, n, d, tensor(p + "bk"));
        kn::gemm_acc(layer.k.data(), h->data(), tensor(p + "wk"), n, din, d);
        broadcast_bias(layer.v, n, d, tensor(p + "bv"));
        kn::gemm_acc(layer.v.data(), h->data(), tensor(p + "wv"), n, din, d);

        layer.z.assign(n * d, 0.0);
        layer.attn.assign(n, {});
        std::vector<double> scores;
        for (size_t i = 0; i < n; ++i) {
            const auto& nbrs = trace.neighbors[i];
            scores.resize(nbrs.size());
            double smax = -std::numeric_limits<double>::infinity();
            for (size_t mi = 0; mi < nbrs.size(); ++mi) {
                size_t m = static_cast<size_t>(nbrs[mi]);
                scores[mi] = kn::dot(layer.q.data() + i * d, layer.k.data() + m * d, d) *
                             inv_sqrt_d;
                smax = std::max(smax, scores[mi]);
            }
            double denom = 0;
            for (double& s : scores) {
                s = std::exp(s - smax);
                denom += s;
            }
            auto& alpha = layer.attn[i];
            alpha.resize(nbrs.size());
            double* zi = layer.z.data() + i * d;
            for (size_t mi = 0; mi < nbrs.size(); ++mi) {
                alpha[mi] = scores[mi] / denom;
                kn::axpy(zi, alpha[mi], layer.v.data() + static_cast<size_t>(nbrs[mi]) * d, d);
            }
        }

        broadcast_bias(layer.pre, n, d, tensor(p + "bo"));
        kn::gemm_acc(layer.pre.data(), layer.z.data(), tensor(p + "wo"), n, d, d);
        layer.out = layer.pre;
        kn::relu(layer.out.data(), n * d);

        h = &layer.out;
        din = d;
    }

    pooled_mean_sorted(*h, n, d, trace.pooled);

    // Global branch: rectified FC stack on the 1 x global_dim vector.
    const std::vector<double>* x = input.global;
    size_t gin = static_cast<size_t>(config_.global_dim);
    for (size_t j = 0; j < config_.global_fc_dims.size(); ++j) {
        size_t gout = static_cast<size_t>(config_.global_fc_dims[j]);
        const std::string p = "global" + std::to_string(j) + ".";
        std::vector<double> pre(tensor(p + "b"), tensor(p + "b") + gout);
        const double* w = tensor(p + "w");
        for (size_t l = 0; l < gin; ++l) kn::axpy(pre.data(), (*x)[l], w + l * gout, gout);
        trace.global_pre.push_back(pre);
        kn::relu(pre.data(), gout);
        trace.global_out.push_back(std::move(pre));
        x = &trace.global_out.back();
        gin = gout;
    }

    trace.concat = trace.pooled;
    trace.concat.insert(trace.concat.end(), trace.global_out.back().begin(),
                        trace.global_out.back().end());

    const std::vector<double>* a = &trace.concat;
    size_t hin = static_cast<size_t>(config_.concat_dim());
    const size_t last = config_.head_dims.size() - 1;
    for (size_t j = 0; j < config_.head_dims.size(); ++j) {
        size_t hout = static_cast<size_t>(config_.head_dims[j]);
        const std::string p = "head" + std::to_string(j) + ".";
        std::vector<double> pre(tensor(p + "b"), tensor(p + "b") + hout);
        const double* w = tensor(p + "w");
        for (size_t l = 0; l < hin; ++l) kn::axpy(pre.data(), (*a)[l], w + l * hout, hout);
        trace.head_pre.push_back(pre);
        if (j < last) kn::relu(pre.data(), hout);
        trace.head_out.push_back(std::move(pre));
        a = &trace.head_out.back();
        hin = hout;
    }
    trace.output = trace.head_out.back()[0];
    return trace;
}

double Model::forward(const ModelParams& params, const ModelInput& input) const {
    return forward_trace(params, input).output;
}

double Model::forward_with_pooled(const ModelParams& params, std::span<const double> pooled,
                                  const std::vector<double>& global) const {
    if (pooled.size() != static_cast<size_t>(config_.gt_hidden))
        throw ContractError("forward_with_pooled: pooled width mismatch");
    if (global.size() != static_cast<size_t>(config_.global_dim))
        throw ContractError("forward_with_pooled: global width mismatch");
    if (params.flat.size() != shape_.total) throw ContractError("parameter vector size mismatch");

    const double* flat = params.flat.data();
    auto tensor = [&](const std::string& name) { return flat + shape_.find(name).offset; };

    std::vector<double> x = global;
    size_t gin = x.size();
    for (size_t j = 0; j < config_.global_fc_dims.size(); ++j) {
        size_t gout = static_cast<size_t>(config_.global_fc_dims[j]);
        const std::string p = "global" + std::to_string(j) + ".";
        std::vector<double> pre(tensor(p + "b"), tensor(p + "b") + gout);
        const double* w = tensor(p + "w");
        for (size_t l = 0; l < gin; ++l) kn::axpy(pre.data(), x[l], w + l * gout, gout);
        kn::relu(pre.data(), gout);
        x = std::move(pre);
        gin = gout;
    }

    std::vector<double> a(pooled.begin(), pooled.end());
    a.insert(a.end(), x.begin(), x.end());
    size_t hin = a.size();
    const size_t last = config_.head_dims.size() - 1;
    for (size_t j = 0; j < config_.head_dims.size(); ++j) {
        size_t hout = static_cast<size_t>(config_.head_dims[j]);
        const std::string p = "head" + std::to_string(j) + ".";
        std::vector<double> pre(tensor(p + "b"), tensor(p + "b") + hout);
        const double* w = tensor(p + "w");
        for (size_t l = 0; l < hin; ++l) kn::axpy(pre.data(), a[l], w + l * hout, hout);
        if (j < last) kn::relu(pre.data(), hout);
        a = std::move(pre);
        hin = hout;
    }
    return a[0];
}

void Model::backward(const ModelParams& params, const ModelInput& input, const ForwardTrace& trace,
                     double upstream, std::span<double> grad) const {
    if (grad.size() != shape_.total) throw ContractError("gradient vector size mismatch");
    const size_t n = input.nodes->rows;
    const size_t d = static_cast<size_t>(config_.gt_hidden);

    const double* flat = params.flat.data();
    auto tensor = [&](const std::string& name) { return flat + shape_.find(name).offset; };
    auto gtensor = [&](const std::string& name) { return grad.data() + shape_.find(name).offset; };

    // Head backward.
    const size_t last = config_.head_dims.size() - 1;
    std::vector<double> gpre{upstream};
    for (size_t j = last + 1; j-- > 0;) {
        size_t hout = static_cast<size_t>(config_.head_dims[j]);
        size_t hin = j == 0 ? static_cast<size_t>(config_.concat_dim())
                            : static_cast<size_t>(config_.head_dims[j - 1]);
        const std::string p = "head" + std::to_string(j) + ".";
        const std::vector<double>& a_in = j == 0 ? trace.concat : trace.head_out[j - 1];

        double* gw = gtensor(p + "w");
        for (size_t l = 0; l < hin; ++l) kn::axpy(gw + l * hout, a_in[l], gpre.data(), hout);
        kn::add(gtensor(p + "b"), gpre.data(), hout);

        std::vector<double> ga(hin);
        const double* w = tensor(p + "w");
        for (size_t l = 0; l < hin; ++l) ga[l] = kn::dot(w + l * hout, gpre.data(), hout);

        if (j == 0) {
            gpre = std::move(ga);
            break;
        }
        kn::relu_backward(ga.data(), trace.head_pre[j - 1].data(), hin);
        gpre = std::move(ga);
    }

    // Split the concat gradient.
    std::vector<double> gpooled(gpre.begin(), gpre.begin() + static_cast<ptrdiff_t>(d));
    std::vector<double> gglobal(gpre.begin() + static_cast<ptrdiff_t>(d), gpre.end());

    // Global branch backward.
    for (size_t j = config_.global_fc_dims.size(); j-- > 0;) {
        size_t gout = static_cast<size_t>(config_.global_fc_dims[j]);
        size_t gin = j == 0 ? static_cast<size_t>(config_.global_dim)
                            : static_cast<size_t>(config_.global_fc_dims[j - 1]);
        const std::string p = "global" + std::to_string(j) + ".";
        const std::vector<double>& x_in = j == 0 ? *input.global : trace.global_out[j - 1];

        kn::relu_backward(gglobal.data(), trace.global_pre[j].data(), gout);

        double* gw = gtensor(p + "w");
        for (size_t l = 0; l < gin; ++l) kn::axpy(gw + l * gout, x_in[l], gglobal.data(), gout);
        kn::add(gtensor(p + "b"), gglobal.data(), gout);

        if (j == 0) break;
        std::vector<double> gx(gin);
        const double* w = tensor(p + "w");
        for (size_t l = 0; l < gin; ++l) gx[l] = kn::dot(w + l * gout, gglobal.data(), gout);
        gglobal = std::move(gx);
    }

    // Pooling backward: mean distributes gradient uniformly over nodes.
    std::vector<double> gh(n * d);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (size_t r = 0; r < n; ++r) {
        for (size_t c = 0; c < d; ++c) gh[r * d + c] = gpooled[c] * inv_n;
    }

    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    for (size_t l = static_cast<size_t>(config_.gt_layers); l-- > 0;) {
        const auto& layer = trace.layers[l];
        const std::string p = "gt" + std::to_string(l) + ".";
        const size_t din = l == 0 ? static_cast<size_t>(config_.node_dim) : d;
        const std::vector<double>& h_in = l == 0 ? input.nodes->data : trace.layers[l - 1].out;

        // Through the output projection and its rectifier.
        std::vector<double> gp = gh;
        kn::relu_backward(gp.data(), layer.pre.data(), n * d);
        kn::gemm_acc_at_b(gtensor(p + "wo"), layer.z.data(), gp.data(), n, d, d);
        column_sum_acc(gtensor(p + "bo"), gp, n, d);
        std::vector<double> gz(n * d, 0.0);
        kn::gemm_acc_a_bt(gz.data(), gp.data(), tensor(p + "wo"), n, d, d);

        // Through attention.
        std::vector<double> gq(n * d, 0.0), gk(n * d, 0.0), gv(n * d, 0.0);
        std::vector<double> galpha, gs;
        for (size_t i = 0; i < n; ++i) {
            const auto& nbrs = trace.neighbors[i];
            const auto& alpha = layer.attn[i];
            const double* gzi = gz.data() + i * d;
            galpha.resize(nbrs.size());
            gs.resize(nbrs.size());
            double mix = 0;
            for (size_t mi = 0; mi < nbrs.size(); ++mi) {
                size_t m = static_cast<size_t>(nbrs[mi]);
                galpha[mi] = kn::dot(gzi, layer.v.data() + m * d, d);
                kn::axpy(gv.data() + m * d, alpha[mi], gzi, d);
                mix += alpha[mi] * galpha[mi];
            }
            for (size_t mi = 0; mi < nbrs.size(); ++mi) {
                gs[mi] = alpha[mi] * (galpha[mi] - mix);
            }
            double* gqi = gq.data() + i * d;
            for (size_t mi = 0; mi < nbrs.size(); ++mi) {
                size_t m = static_cast<size_t>(nbrs[mi]);
                kn::axpy(gqi, gs[mi] * inv_sqrt_d, layer.k.data() + m * d, d);
                kn::axpy(gk.data() + m * d, gs[mi] * inv_sqrt_d, layer.q.data() + i * d, d);
            }
        }

        // Through the Q/K/V projections back to the layer input.
        std::vector<double> gh_prev(n * din, 0.0);
        kn::gemm_acc_at_b(gtensor(p + "wq"), h_in.data(), gq.data(), n, din, d);
        column_sum_acc(gtensor(p + "bq"), gq, n, d);
        kn::gemm_acc_a_bt(gh_prev.data(), gq.data(), tensor(p + "wq"), n, d, din);
        kn::gemm_acc_at_b(gtensor(p + "wk"), h_in.data(), gk.data(), n, din, d);
        column_sum_acc(gtensor(p + "bk"), gk, n, d);
        kn::gemm_acc_a_bt(gh_prev.data(), gk.data(), tensor(p + "wk"), n, d, din);
        kn::gemm_acc_at_b(gtensor(p + "wv"), h_in.data(), gv.data(), n, din, d);
        column_sum_acc(gtensor(p + "bv"), gv, n, d);
        kn::gemm_acc_a_bt(gh_prev.data(), gv.data(), tensor(p + "wv"), n, d, din);

        gh = std::move(gh_prev);
    }
}

double Model::loss_and_grad(const ModelParams& params, std::span<const ModelInput> batch,
                            std::span<const double> targets, std::vector<double>& grad) const {
    if (batch.empty()) throw ContractError("loss_and_grad: empty batch");
    if (batch.size() != targets.size()) throw ContractError("loss_and_grad: size mismatch");

    const size_t b = batch.size();
    const double inv_b = 1.0 / static_cast<double>(b);
    std::vector<double> preds(b, 0.0);

    // Samples accumulate into a fixed number of slots by index stride, and
    // the slots reduce in order afterwards. The grouping depends only on the
    // constant slot count, so the result is identical for any thread count.
    const size_t slots = std::min<size_t>(8, b);
    std::vector<std::vector<double>> buffers(slots);
    parallel_for(slots, [&](size_t j) {
        buffers[j].assign(shape_.total, 0.0);
        for (size_t s = j; s < b; s += slots) {
            ForwardTrace trace = forward_trace(params, batch[s]);
            preds[s] = trace.output;
            const double up = 2.0 * (trace.output - targets[s]) * inv_b;
            backward(params, batch[s], trace, up, buffers[j]);
        }
    });
    grad = std::move(buffers[0]);
    for (size_t j = 1; j < slots; ++j) {
        kn::add(grad.data(), buffers[j].data(), shape_.total);
    }

    double loss = 0;
    for (size_t s = 0; s < b; ++s) {
        const double e = preds[s] - targets[s];
        loss += e * e;
    }
    loss *= inv_b;
    if (!std::isfinite(loss)) throw DivergenceError("non-finite training loss");
    return loss;
}

const char* target_space_name(TargetSpace s) {
    return s == TargetSpace::LogSeconds ? "log_seconds" : "seconds";
}

TargetSpace parse_target_space(const std::string& name) {
    if (name == "log_seconds" || name == "log") return TargetSpace::LogSeconds;
    if (name == "seconds" || name == "raw") return TargetSpace::Seconds;
    throw ContractError("unknown target space '" + name + "'");
}

double predict_seconds(const ModelBundle& bundle, const GraphSample& sample,
                       const std::vector<double>& global_vector) {
    Model model(bundle.config);
    NodeFeatureMatrix nodes = sample.node_features;
    apply_minmax(std::span<double>(nodes.data), nodes.cols, bundle.scalers.node);
    std::vector<double> global = global_vector;
    apply_minmax(std::span<double>(global), global.size(), bundle.scalers.global);

    ModelInput input;
    input.nodes = &nodes;
    input.adjacency = &sample.adjacency;
    input.global = &global;
    double y = model.forward(bundle.params, input);
    return bundle.space == TargetSpace::LogSeconds ? std::exp(y) : y;
}

}  // namespace qtime
