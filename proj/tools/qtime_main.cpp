#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qtime/budget.hpp"
#include "qtime/commands.hpp"
#include "qtime/errors.hpp"
#include "qtime/synth.hpp"

namespace {

struct Overrides {
    std::string artifact_dir;
    std::string manifest;
    std::string model;
    bool has_seed = false;
    uint64_t seed = 0;
    int epochs = -1;
    int batch_size = -1;
    double learning_rate = -1;
    double alpha = -1;
};

void add_override_flags(CLI::App* cmd, std::string& config_path, Overrides& ov) {
    cmd->add_option("--config", config_path, "Project config JSON")->capture_default_str();
    cmd->add_option("--artifact-dir", ov.artifact_dir, "Override the artifact directory");
    cmd->add_option("--manifest", ov.manifest, "Override the timing manifest path");
    cmd->add_option("--model", ov.model, "Override the model weight path");
    cmd->add_option("--seed", ov.seed, "Override the project seed")
        ->each([&ov](const std::string&) { ov.has_seed = true; });
    cmd->add_option("--epochs", ov.epochs, "Override training epochs");
    cmd->add_option("--batch-size", ov.batch_size, "Override training batch size");
    cmd->add_option("--lr", ov.learning_rate, "Override the Adam step size");
    cmd->add_option("--alpha", ov.alpha, "Override the GSx blend weight");
}

qtime::ProjectConfig load_config(const std::string& path, const Overrides& ov) {
    qtime::ProjectConfig cfg = qtime::ProjectConfig::load(path);
    if (!ov.artifact_dir.empty()) cfg.artifact_dir = ov.artifact_dir;
    if (!ov.manifest.empty()) cfg.manifest_path = ov.manifest;
    if (!ov.model.empty()) cfg.model_path = ov.model;
    if (ov.has_seed) cfg.seed = ov.seed;
    if (ov.epochs > 0) cfg.epochs = ov.epochs;
    if (ov.batch_size > 0) cfg.batch_size = ov.batch_size;
    if (ov.learning_rate > 0) cfg.learning_rate = ov.learning_rate;
    if (ov.alpha >= 0) cfg.alpha = ov.alpha;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qtime: quantum circuit execution-time prediction toolkit"};
    app.require_subcommand(1);

    std::string config_path = "qtime.json";
    Overrides ov;

    auto* extract = app.add_subcommand("extract", "Extract global and graph features");
    add_override_flags(extract, config_path, ov);

    auto* sample = app.add_subcommand("sample", "GSx-select circuits to measure");
    size_t k = 0;
    sample->add_option("-k,--count", k, "Number of pairs to select")->required();
    add_override_flags(sample, config_path, ov);

    auto* train = app.add_subcommand("train", "Train the regressor on manifest timings");
    add_override_flags(train, config_path, ov);

    auto* finetune = app.add_subcommand("finetune", "k-fold CV fine-tuning from saved weights");
    std::string pretrained;
    size_t folds = 10;
    finetune->add_option("--pretrained", pretrained, "Pretrained weight container")->required();
    finetune->add_option("--folds", folds, "Number of CV folds")->capture_default_str();
    add_override_flags(finetune, config_path, ov);

    auto* predict = app.add_subcommand("predict", "Predict seconds for every extracted pair");
    add_override_flags(predict, config_path, ov);

    auto* evaluate = app.add_subcommand("evaluate", "Score predictions against the manifest");
    std::string predictions;
    evaluate->add_option("--predictions", predictions, "Predictions artifact (default from config)");
    add_override_flags(evaluate, config_path, ov);

    auto* importance = app.add_subcommand("importance", "Rank global features by mean |SHAP|");
    add_override_flags(importance, config_path, ov);

    auto* repeats = app.add_subcommand("repeats", "Minimum repeated-measure counts per record");
    add_override_flags(repeats, config_path, ov);

    auto* budget = app.add_subcommand("budget", "Finite-population sample-size calculation");
    long population = 0;
    double confidence = 95.0, margin = 5.0;
    budget->add_option("-N,--population", population, "Pool size")->required();
    budget->add_option("--confidence", confidence, "Confidence percent")->capture_default_str();
    budget->add_option("--margin", margin, "Error margin percent")->capture_default_str();

    auto* synth = app.add_subcommand("synth", "Generate a synthetic project fixture");
    std::string synth_out = "synthetic";
    qtime::SynthSpec spec;
    synth->add_option("--out", synth_out, "Output directory")->capture_default_str();
    synth->add_option("--circuits", spec.circuits, "Number of circuits")->capture_default_str();
    synth->add_option("--backends", spec.backends, "Number of backends")->capture_default_str();
    synth->add_option("--synth-seed", spec.seed, "Generator seed")->capture_default_str();
    synth->add_option("--max-qubits", spec.max_qubits, "Maximum qubits per circuit")
        ->capture_default_str();
    synth->add_option("--max-gates", spec.max_gates, "Maximum gates per circuit")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (extract->parsed()) qtime::cmd_extract(load_config(config_path, ov));
        if (sample->parsed()) qtime::cmd_sample(load_config(config_path, ov), k);
        if (train->parsed()) qtime::cmd_train(load_config(config_path, ov));
        if (finetune->parsed())
            qtime::cmd_finetune(load_config(config_path, ov), pretrained, folds);
        if (predict->parsed()) qtime::cmd_predict(load_config(config_path, ov));
        if (evaluate->parsed()) {
            qtime::ProjectConfig cfg = load_config(config_path, ov);
            std::string path = predictions.empty()
                                   ? cfg.artifact_dir + "/predictions.csv"
                                   : predictions;
            qtime::cmd_evaluate(cfg, path);
        }
        if (importance->parsed()) qtime::cmd_importance(load_config(config_path, ov));
        if (repeats->parsed()) qtime::cmd_repeats(load_config(config_path, ov));
        if (budget->parsed()) {
            std::cout << qtime::plan_budget(population, confidence, margin) << "\n";
        }
        if (synth->parsed()) {
            qtime::generate_synthetic_project(synth_out, spec);
            std::cout << "wrote synthetic project to " << synth_out << "\n";
        }
    } catch (const qtime::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
