#include "qtime/project_config.hpp"

#include <filesystem>

#include "json.hpp"
#include "qtime/errors.hpp"
#include "qtime/hash.hpp"
#include "qtime/textio.hpp"

namespace qtime {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string resolve(const fs::path& base, const std::string& p) {
    if (p.empty()) return p;
    fs::path path(p);
    if (path.is_absolute()) return path.lexically_normal().string();
    return (base / path).lexically_normal().string();
}

}  // namespace

ProjectConfig ProjectConfig::load(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw DataError(path + ": invalid JSON: " + e.what());
    }

    ProjectConfig cfg;
    const fs::path base = fs::path(path).parent_path();
    try {
        cfg.registry_global_path = resolve(base, j.value("registry_global", ""));
        cfg.registry_node_path = resolve(base, j.value("registry_node", ""));
        cfg.corpus_dir = resolve(base, j.value("corpus_dir", ""));
        cfg.calibration_dir = resolve(base, j.value("calibration_dir", ""));
        cfg.manifest_path = resolve(base, j.value("manifest", ""));
        cfg.artifact_dir = resolve(base, j.value("artifact_dir", "out"));
        cfg.model_path = resolve(base, j.value("model_path", ""));
        if (cfg.model_path.empty())
            cfg.model_path = (fs::path(cfg.artifact_dir) / "model.qtmw").string();

        cfg.seed = j.value("seed", uint64_t{42});
        cfg.target_space = j.value("target_space", std::string("log_seconds"));
        cfg.alpha = j.value("alpha", 0.5);
        cfg.shap_permutations = j.value("shap_permutations", 20);
        if (j.contains("repeats")) {
            cfg.repeats_precision_percent = j["repeats"].value("precision_percent", 25.0);
            cfg.repeats_z = j["repeats"].value("z", 1.960);
        }
        if (j.contains("train")) {
            cfg.epochs = j["train"].value("epochs", 500);
            cfg.batch_size = j["train"].value("batch_size", 128);
            cfg.learning_rate = j["train"].value("learning_rate", 1e-3);
        }
    } catch (const json::exception& e) {
        throw DataError(path + ": bad config field: " + e.what());
    }
    parse_target_space(cfg.target_space);  // validate early
    return cfg;
}

TrainConfig ProjectConfig::train_config() const {
    TrainConfig tc;
    tc.epochs = epochs;
    tc.batch_size = batch_size;
    tc.learning_rate = learning_rate;
    tc.seed = seed;
    tc.space = parse_target_space(target_space);
    return tc;
}

uint64_t ProjectConfig::semantic_hash() const {
    std::string canon;
    canon += "seed=" + std::to_string(seed);
    canon += ";space=" + target_space;
    canon += ";alpha=" + format_double(alpha);
    canon += ";shap=" + std::to_string(shap_permutations);
    canon += ";r=" + format_double(repeats_precision_percent);
    canon += ";z=" + format_double(repeats_z);
    canon += ";epochs=" + std::to_string(epochs);
    canon += ";batch=" + std::to_string(batch_size);
    canon += ";lr=" + format_double(learning_rate);
    return fnv1a64(canon);
}

}  // namespace qtime
