#include "qtime/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "qtime/artifacts.hpp"
#include "qtime/calibration.hpp"
#include "qtime/circuit.hpp"
#include "qtime/dag.hpp"
#include "qtime/errors.hpp"
#include "qtime/global_features.hpp"
#include "qtime/gsx.hpp"
#include "qtime/hash.hpp"
#include "qtime/manifest.hpp"
#include "qtime/metrics.hpp"
#include "qtime/model_io.hpp"
#include "qtime/node_features.hpp"
#include "qtime/parallel.hpp"
#include "qtime/qasm.hpp"
#include "qtime/repeats.hpp"
#include "qtime/shap.hpp"
#include "qtime/textio.hpp"
#include "qtime/train.hpp"

namespace qtime {
namespace {

namespace fs = std::filesystem;

std::string apath(const ProjectConfig& cfg, const std::string& name) {
    return (fs::path(cfg.artifact_dir) / name).string();
}

struct Registries {
    GateRegistry global;
    GateRegistry node;
};

Registries load_registries(const ProjectConfig& cfg) {
    return {GateRegistry::load(cfg.registry_global_path),
            GateRegistry::load(cfg.registry_node_path)};
}

ArtifactHeader base_header(const ProjectConfig& cfg) {
    ArtifactHeader h;
    h["config_hash"] = hash_hex(cfg.semantic_hash());
    h["seed"] = std::to_string(cfg.seed);
    return h;
}

void stamp_inputs(ArtifactHeader& h, const ProjectConfig& cfg, const Registries& regs) {
    h["corpus_hash"] = hash_hex(hash_dir(cfg.corpus_dir, ".qasm"));
    h["calib_hash"] = hash_hex(hash_dir(cfg.calibration_dir, ".calib"));
    h["registry_global_hash"] = hash_hex(regs.global.content_hash());
    h["registry_node_hash"] = hash_hex(regs.node.content_hash());
}

/// Refuses to consume a feature artifact whose recorded input hashes no
/// longer match the inputs on disk.
void assert_fresh(const ArtifactHeader& header, const ProjectConfig& cfg, const Registries& regs,
                  const std::string& artifact) {
    ArtifactHeader current;
    stamp_inputs(current, cfg, regs);
    for (const char* key :
         {"corpus_hash", "calib_hash", "registry_global_hash", "registry_node_hash"}) {
        auto it = header.find(key);
        if (it == header.end() || it->second != current[key])
            throw Error(artifact + " is stale (" + key +
                        " changed); rerun `qtime extract` against the current inputs");
    }
}

struct Extracted {
    FeatureTable table;
    GraphArchive archive;
    std::map<std::string, size_t> table_index;                           // circuit_id -> row
    std::map<std::pair<std::string, std::string>, size_t> graph_index;  // (circuit, backend)
};

Extracted load_extracted(const ProjectConfig& cfg, const Registries& regs) {
    Extracted e;
    e.table = read_feature_table(apath(cfg, "features_global.csv"));
    e.archive = read_graph_archive(apath(cfg, "graphs.qga"));
    assert_fresh(e.table.header, cfg, regs, "features_global.csv");
    assert_fresh(e.archive.header, cfg, regs, "graphs.qga");
    for (size_t i = 0; i < e.table.ids.size(); ++i) e.table_index[e.table.ids[i]] = i;
    for (size_t i = 0; i < e.archive.entries.size(); ++i) {
        const auto& entry = e.archive.entries[i];
        e.graph_index[{entry.circuit_id, entry.backend_id}] = i;
    }
    return e;
}

/// Joins manifest timings with extracted features into labeled samples,
/// sorted by (circuit_id, backend_id). Manifest rows without features are
/// counted and reported on stderr.
std::vector<LabeledSample> join_samples(const Extracted& e,
                                        const std::vector<TimingRecord>& records) {
    std::vector<const TimingRecord*> sorted;
    sorted.reserve(records.size());
    for (const TimingRecord& r : records) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](const TimingRecord* a, const TimingRecord* b) {
        return std::tie(a->circuit_id, a->backend_id) < std::tie(b->circuit_id, b->backend_id);
    });

    std::vector<LabeledSample> samples;
    size_t missing = 0;
    for (const TimingRecord* r : sorted) {
        auto trow = e.table_index.find(r->circuit_id);
        auto grow = e.graph_index.find({r->circuit_id, r->backend_id});
        if (trow == e.table_index.end() || grow == e.graph_index.end()) {
            ++missing;
            continue;
        }
        const GraphArchiveEntry& ge = e.archive.entries[grow->second];
        LabeledSample s;
        s.circuit_id = r->circuit_id;
        s.backend_id = r->backend_id;
        s.global = e.table.rows[trow->second];
        s.graph.node_features = ge.nodes;
        s.graph.adjacency = ge.edges;
        s.graph.circuit_id = ge.circuit_id;
        s.graph.backend_id = ge.backend_id;
        s.target_seconds = r->mean_seconds();
        samples.push_back(std::move(s));
    }
    if (missing > 0) {
        std::cerr << "note: " << missing
                  << " manifest row(s) lack extracted features and were skipped\n";
    }
    return samples;
}

ModelConfig model_config_for(const Extracted& e) {
    ModelConfig mc;
    mc.global_dim = static_cast<int>(e.table.columns.size());
    return mc;
}

std::string epoch_report_text(const ArtifactHeader& header, const TrainReport& report) {
    std::string out = render_header("train-report", header);
    out += "epoch,train_mse,test_mse\n";
    out += "0,," + format_double(report.initial_test_mse) + "\n";
    for (const EpochRecord& rec : report.epochs) {
        out += std::to_string(rec.epoch) + "," + format_double(rec.train_mse) + "," +
               format_double(rec.test_mse) + "\n";
    }
    return out;
}

void write_id_list(const std::string& path, const ArtifactHeader& header,
                   const std::string& kind, const std::vector<LabeledSample>& samples,
                   const std::vector<size_t>& idx) {
    std::string out = render_header(kind, header);
    for (size_t i : idx) out += samples[i].key() + "\n";
    write_text_file(path, out);
}

}  // namespace

void cmd_extract(const ProjectConfig& cfg) {
    Registries regs = load_registries(cfg);
    auto corpus = list_files_sorted(cfg.corpus_dir, ".qasm");
    if (corpus.empty()) throw Error("empty corpus: no .qasm files in " + cfg.corpus_dir);
    auto calib_files = list_files_sorted(cfg.calibration_dir, ".calib");
    if (calib_files.empty())
        throw Error("no .calib files in " + cfg.calibration_dir);

    std::vector<BackendCalibration> backends;
    for (const std::string& f : calib_files) backends.push_back(BackendCalibration::load(f));

    DirLock lock(cfg.artifact_dir);
    ArtifactHeader header = base_header(cfg);
    stamp_inputs(header, cfg, regs);

    FeatureTable table;
    table.header = header;
    table.columns = global_feature_names(regs.global);
    GraphArchive archive;
    archive.header = header;
    std::string error_log;
    size_t failures = 0;

    for (const std::string& file : corpus) {
        const std::string id = fs::path(file).stem().string();
        try {
            Circuit circuit = parse_qasm(read_text_file(file), regs.node, id);
            GlobalFeatures gf = global_features(circuit, regs.global, &regs.node);
            CircuitDag dag = to_dag(circuit);

            table.ids.push_back(id);
            table.rows.push_back(gf.to_vector());
            for (const BackendCalibration& calib : backends) {
                GraphArchiveEntry entry;
                entry.circuit_id = id;
                entry.backend_id = calib.backend_id;
                entry.nodes = node_features(dag, calib, regs.node);
                entry.edges = dag.edges;
                archive.entries.push_back(std::move(entry));
            }
        } catch (const Error& e) {
            ++failures;
            error_log += fs::path(file).filename().string() + ": " + e.what() + "\n";
        }
    }

    write_feature_table(apath(cfg, "features_global.csv"), table);
    write_graph_archive(apath(cfg, "graphs.qga"), archive);
    write_text_file(apath(cfg, "extract_errors.log"), error_log);
    std::cout << "extracted " << table.ids.size() << " circuit(s) x " << backends.size()
              << " backend(s); " << failures << " failure(s) logged\n";
}

void cmd_sample(const ProjectConfig& cfg, size_t k) {
    if (k == 0) throw ContractError("sample: K must be positive");
    Registries regs = load_registries(cfg);
    Extracted e = load_extracted(cfg, regs);
    if (e.archive.entries.empty()) throw Error("sample: graph archive is empty");

    // Pool of circuit x backend pairs; a circuit may appear once per backend.
    CandidatePool pool;
    pool.alpha = cfg.alpha;
    std::vector<std::vector<double>> globals, graphs;
    for (const GraphArchiveEntry& entry : e.archive.entries) {
        auto trow = e.table_index.find(entry.circuit_id);
        if (trow == e.table_index.end())
            throw Error("sample: graph entry without feature row: " + entry.circuit_id);
        globals.push_back(e.table.rows[trow->second]);
        graphs.push_back(pooled_graph_vector(entry.nodes));
    }
    auto [norm_globals, gr] = minmax_scale(globals);
    auto [norm_graphs, rr] = minmax_scale(graphs);
    (void)gr;
    (void)rr;
    for (size_t i = 0; i < e.archive.entries.size(); ++i) {
        PoolItem item;
        item.id = e.archive.entries[i].circuit_id + "@" + e.archive.entries[i].backend_id;
        item.global_vec = std::move(norm_globals[i]);
        item.graph_vec = std::move(norm_graphs[i]);
        pool.items.push_back(std::move(item));
    }

    uint64_t pool_hash = kFnvOffset;
    for (const PoolItem& item : pool.items) {
        pool_hash = fnv1a64(item.id, pool_hash);
        pool_hash = fnv1a64(item.global_vec.data(), item.global_vec.size() * sizeof(double),
                            pool_hash);
        pool_hash =
            fnv1a64(item.graph_vec.data(), item.graph_vec.size() * sizeof(double), pool_hash);
    }

    SelectionResult sel = gsx_select(pool, k);

    DirLock lock(cfg.artifact_dir);
    ArtifactHeader header = base_header(cfg);
    header["alpha"] = format_double(cfg.alpha);
    header["K"] = std::to_string(k);
    header["pool_size"] = std::to_string(pool.items.size());
    header["pool_hash"] = hash_hex(pool_hash);
    std::string out = render_header("selection", header);
    for (size_t i = 0; i < sel.selected_ids.size(); ++i) {
        out += sel.selected_ids[i] + "," + format_double(sel.distances_at_selection[i]) + "\n";
    }
    write_text_file(apath(cfg, "selection.txt"), out);
    std::cout << "selected " << k << " of " << pool.items.size() << " pool items\n";
}

void cmd_train(const ProjectConfig& cfg) {
    Registries regs = load_registries(cfg);
    Extracted e = load_extracted(cfg, regs);
    auto records = load_manifest(cfg.manifest_path);
    auto samples = join_samples(e, records);
    if (samples.size() < 10)
        throw Error("train: need at least 10 labeled samples, have " +
                    std::to_string(samples.size()));

    ModelConfig mc = model_config_for(e);
    mc.seed = cfg.seed;
    TrainConfig tc = cfg.train_config();
    TrainTestSplit split = split_train_test(samples.size(), derive_seed(cfg.seed, "train.split"));

    TrainOutcome outcome = train(samples, tc, mc, nullptr, &split);
    if (outcome.report.diverged)
        throw Error("train: diverged (" + outcome.report.divergence_note + ")");

    DirLock lock(cfg.artifact_dir);
    save_model(outcome.bundle, cfg.model_path);

    ArtifactHeader header = base_header(cfg);
    header["best_epoch"] = std::to_string(outcome.report.best_epoch);
    header["best_test_mse"] = format_double(outcome.report.best_test_mse);
    header["n_train"] = std::to_string(split.train.size());
    header["n_test"] = std::to_string(split.test.size());
    header["space"] = cfg.target_space;
    write_text_file(apath(cfg, "train_report.csv"), epoch_report_text(header, outcome.report));
    write_id_list(apath(cfg, "train_ids.txt"), base_header(cfg), "id-list", samples, split.train);
    write_id_list(apath(cfg, "test_ids.txt"), base_header(cfg), "id-list", samples, split.test);
    std::cout << "trained on " << split.train.size() << " samples; best test MSE "
              << format_double(outcome.report.best_test_mse) << " at epoch "
              << outcome.report.best_epoch << "\n";
}

void cmd_finetune(const ProjectConfig& cfg, const std::string& pretrained_path, size_t k_folds) {
    Registries regs = load_registries(cfg);
    Extracted e = load_extracted(cfg, regs);
    ModelBundle pretrained = load_model(pretrained_path);
    auto records = load_manifest(cfg.manifest_path);
    auto samples = join_samples(e, records);
    if (samples.size() < k_folds)
        throw Error("finetune: fewer samples than folds");

    TrainConfig tc = cfg.train_config();
    tc.space = pretrained.space;
    CvReport report = fine_tune_cv(pretrained, samples, k_folds, tc);

    DirLock lock(cfg.artifact_dir);
    ArtifactHeader header = base_header(cfg);
    header["k"] = std::to_string(k_folds);
    header["n"] = std::to_string(samples.size());
    header["pretrained_hash"] = hash_hex(hash_file(pretrained_path));
    header["space"] = std::string(target_space_name(pretrained.space));

    std::string out = render_header("cv-report", header);
    out += "fold,best_epoch,best_mse,r_squared,nmse\n";
    for (const FoldResult& fr : report.folds) {
        out += std::to_string(fr.fold) + "," + std::to_string(fr.best_epoch) + "," +
               format_double(fr.best_mse) + "," + format_double(fr.r_squared) + "," +
               format_double(fr.nmse) + "\n";
    }
    out += "mean," + std::string() + "," + format_double(report.mean_best_mse) + "," +
           format_double(report.mean_r_squared) + "," + format_double(report.mean_nmse) + "\n";
    write_text_file(apath(cfg, "cv_report.csv"), out);
    std::cout << "cv over " << k_folds << " folds: mean best MSE "
              << format_double(report.mean_best_mse) << ", mean R^2 "
              << format_double(report.mean_r_squared) << "\n";
}

void cmd_predict(const ProjectConfig& cfg) {
    Registries regs = load_registries(cfg);
    Extracted e = load_extracted(cfg, regs);
    ModelBundle bundle = load_model(cfg.model_path);
    if (bundle.config.global_dim != static_cast<int>(e.table.columns.size()))
        throw Error("predict: model global width does not match the feature table");

    std::vector<double> preds(e.archive.entries.size());
    std::vector<size_t> ok(e.archive.entries.size(), 1);
    parallel_for(e.archive.entries.size(), [&](size_t i) {
        const GraphArchiveEntry& entry = e.archive.entries[i];
        auto trow = e.table_index.find(entry.circuit_id);
        if (trow == e.table_index.end()) {
            ok[i] = 0;
            return;
        }
        GraphSample sample;
        sample.node_features = entry.nodes;
        sample.adjacency = entry.edges;
        sample.circuit_id = entry.circuit_id;
        sample.backend_id = entry.backend_id;
        preds[i] = predict_seconds(bundle, sample, e.table.rows[trow->second]);
    });

    DirLock lock(cfg.artifact_dir);
    ArtifactHeader header = base_header(cfg);
    header["model_hash"] = hash_hex(hash_file(cfg.model_path));
    header["space"] = std::string(target_space_name(bundle.space));
    std::string out = render_header("predictions", header);
    out += "circuit_id,backend_id,predicted_seconds\n";
    for (size_t i = 0; i < e.archive.entries.size(); ++i) {
        if (!ok[i]) continue;
        out += e.archive.entries[i].circuit_id + "," + e.archive.entries[i].backend_id + "," +
               format_double(preds[i]) + "\n";
    }
    write_text_file(apath(cfg, "predictions.csv"), out);
    std::cout << "predicted " << e.archive.entries.size() << " pair(s)\n";
}

void cmd_evaluate(const ProjectConfig& cfg, const std::string& predictions_path) {
    auto [pred_header, lines] = parse_artifact(read_text_file(predictions_path), predictions_path);
    (void)pred_header;
    if (lines.empty() || split_fields(lines[0]).size() != 3)
        throw DataError(predictions_path + ": expected circuit_id,backend_id,predicted_seconds");

    std::map<std::pair<std::string, std::string>, double> predicted;
    for (size_t i = 1; i < lines.size(); ++i) {
        auto fields = split_fields(lines[i]);
        if (fields.size() != 3)
            throw DataError(predictions_path + " row " + std::to_string(i) + ": malformed");
        predicted[{fields[0], fields[1]}] =
            parse_double(fields[2], predictions_path + " row " + std::to_string(i));
    }

    auto records = load_manifest(cfg.manifest_path);
    TargetSpace space = parse_target_space(cfg.target_space);
    std::vector<std::pair<double, double>> pairs;
    for (const TimingRecord& rec : records) {
        auto it = predicted.find({rec.circuit_id, rec.backend_id});
        if (it == predicted.end()) continue;
        double y = rec.mean_seconds();
        double yhat = it->second;
        if (space == TargetSpace::LogSeconds) {
            y = std::log(y);
            yhat = std::log(yhat);
        }
        pairs.emplace_back(y, yhat);
    }
    if (pairs.empty())
        throw Error("evaluate: no overlapping (circuit_id, backend_id) pairs between "
                    "predictions and manifest");

    EvaluationReport report = evaluate(pairs, space);

    DirLock lock(cfg.artifact_dir);
    ArtifactHeader header = base_header(cfg);
    header["space"] = std::string(target_space_name(space));
    write_kv_report(apath(cfg, "evaluation.csv"), "evaluation", header,
                    {{"n", std::to_string(report.n)},
                     {"mse", format_double(report.mse)},
                     {"r_squared", format_double(report.r_squared)},
                     {"nmse", format_double(report.nmse)}});
    std::cout << "n=" << report.n << " mse=" << format_double(report.mse)
              << " r_squared=" << format_double(report.r_squared)
              << " nmse=" << format_double(report.nmse) << "\n";
}

void cmd_importance(const ProjectConfig& cfg) {
    Registries regs = load_registries(cfg);
    Extracted e = load_extracted(cfg, regs);
    ModelBundle bundle = load_model(cfg.model_path);
    auto records = load_manifest(cfg.manifest_path);
    auto samples = join_samples(e, records);
    if (samples.empty()) throw Error("importance: no labeled samples to attribute");

    const Model model(bundle.config);

    // Pooled graph-branch outputs are fixed per sample; attribution varies
    // only the global features.
    std::vector<std::vector<double>> pooled(samples.size());
    std::vector<std::vector<double>> globals(samples.size());
    parallel_for(samples.size(), [&](size_t i) {
        NodeFeatureMatrix nodes = samples[i].graph.node_features;
        apply_minmax(std::span<double>(nodes.data), nodes.cols, bundle.scalers.node);
        std::vector<double> global = samples[i].global;
        apply_minmax(std::span<double>(global), global.size(), bundle.scalers.global);
        ModelInput input;
        input.nodes = &nodes;
        input.adjacency = &samples[i].graph.adjacency;
        input.global = &global;
        pooled[i] = model.forward_trace(bundle.params, input).pooled;
        globals[i] = samples[i].global;  // raw; the predictor normalizes
    });

    GlobalPredictFn predict = [&](size_t s, const std::vector<double>& raw_global) {
        std::vector<double> g = raw_global;
        apply_minmax(std::span<double>(g), g.size(), bundle.scalers.global);
        return model.forward_with_pooled(bundle.params, pooled[s], g);
    };

    // Baseline: feature means over the attributed set.
    std::vector<double> baseline(e.table.columns.size(), 0.0);
    for (const auto& g : globals) {
        for (size_t c = 0; c < baseline.size(); ++c) baseline[c] += g[c];
    }
    for (double& v : baseline) v /= static_cast<double>(globals.size());

    ImportanceReport report =
        shap_importance(predict, globals, baseline, e.table.columns, cfg.shap_permutations,
                        derive_seed(cfg.seed, "importance"));

    DirLock lock(cfg.artifact_dir);
    ArtifactHeader header = base_header(cfg);
    header["model_hash"] = hash_hex(hash_file(cfg.model_path));
    header["n_samples"] = std::to_string(samples.size());
    header["n_permutations"] = std::to_string(cfg.shap_permutations);

    std::string out = render_header("importance", header);
    out += "rank,feature,mean_abs_shap\n";
    for (size_t r = 0; r < report.ranking.size(); ++r) {
        size_t f = report.ranking[r];
        out += std::to_string(r + 1) + "," + report.names[f] + "," +
               format_double(report.mean_abs[f]) + "\n";
    }
    write_text_file(apath(cfg, "importance.csv"), out);

    std::string chart = render_header("importance-chart", header);
    chart += "feature,mean_abs_shap\n";
    for (size_t f : report.ranking) {
        chart += report.names[f] + "," + format_double(report.mean_abs[f]) + "\n";
    }
    write_text_file(apath(cfg, "importance_chart.csv"), chart);

    std::cout << "top features by mean |SHAP|:\n";
    for (size_t r = 0; r < std::min<size_t>(10, report.ranking.size()); ++r) {
        size_t f = report.ranking[r];
        std::cout << "  " << (r + 1) << ". " << report.names[f] << " "
                  << format_double(report.mean_abs[f]) << "\n";
    }
}

void cmd_repeats(const ProjectConfig& cfg) {
    auto records = load_manifest(cfg.manifest_path);
    DirLock lock(cfg.artifact_dir);
    ArtifactHeader header = base_header(cfg);
    header["precision_percent"] = format_double(cfg.repeats_precision_percent);
    header["z"] = format_double(cfg.repeats_z);

    std::string out = render_header("repeats-plan", header);
    out += "circuit_id,backend_id,mean_s,stdev_s,n_required\n";
    for (const TimingRecord& rec : records) {
        double mean = rec.mean_seconds();
        double stdev = rec.stdev_seconds();
        long n = min_repeats(mean, stdev, cfg.repeats_precision_percent, cfg.repeats_z);
        out += rec.circuit_id + "," + rec.backend_id + "," + format_double(mean) + "," +
               format_double(stdev) + "," + std::to_string(n) + "\n";
    }
    write_text_file(apath(cfg, "repeats_plan.csv"), out);
    std::cout << "planned repeats for " << records.size() << " record(s)\n";
}

}  // namespace qtime
