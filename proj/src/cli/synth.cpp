#include "qtime/synth.hpp"

#include <cmath>
#include <filesystem>

#include "qtime/calibration.hpp"
#include "qtime/circuit.hpp"
#include "qtime/errors.hpp"
#include "qtime/gate_registry.hpp"
#include "qtime/global_features.hpp"
#include "qtime/hash.hpp"
#include "qtime/manifest.hpp"
#include "qtime/rng.hpp"
#include "qtime/textio.hpp"

namespace qtime {
namespace {

namespace fs = std::filesystem;

Circuit random_circuit(Rng& rng, const GateRegistry& registry, const SynthSpec& spec,
                       std::vector<GateKindId>& one_q, std::vector<GateKindId>& two_q) {
    Circuit c;
    c.num_qubits = spec.min_qubits +
                   static_cast<int>(rng.below(static_cast<uint64_t>(
                       spec.max_qubits - spec.min_qubits + 1)));
    c.num_clbits = c.num_qubits;
    int gates = spec.min_gates + static_cast<int>(rng.below(static_cast<uint64_t>(
                                     spec.max_gates - spec.min_gates + 1)));
    for (int g = 0; g < gates; ++g) {
        GateOp op;
        bool two = c.num_qubits >= 2 && rng.uniform01() < 0.4;
        GateKindId kind = two ? two_q[rng.below(two_q.size())] : one_q[rng.below(one_q.size())];
        const GateKind& meta = registry.at(kind);
        op.kind = kind;
        op.arity = meta.arity;
        op.qubits[0] = static_cast<int>(rng.below(static_cast<uint64_t>(c.num_qubits)));
        if (meta.arity == 2) {
            do {
                op.qubits[1] = static_cast<int>(rng.below(static_cast<uint64_t>(c.num_qubits)));
            } while (op.qubits[1] == op.qubits[0]);
        }
        for (int p = 0; p < meta.param_count; ++p) {
            op.params.push_back(rng.uniform(0.0, 6.283185307179586));
        }
        c.ops.push_back(std::move(op));
    }
    for (int q = 0; q < c.num_qubits; ++q) {
        GateOp m;
        m.kind = GateOp::kMeasure;
        m.arity = 1;
        m.qubits[0] = q;
        m.clbit = q;
        c.ops.push_back(m);
    }
    return c;
}

/// The ground-truth log execution time: a fixed smooth function of the true
/// circuit features and the mean T1 of the qubits it touches.
double true_log_time(const Circuit& c, const GlobalFeatures& f, const BackendCalibration& calib) {
    int64_t n_gates = 0;
    for (int64_t count : f.gate_counts) n_gates += count;
    double mean_t1 = 0;
    for (int q = 0; q < c.num_qubits; ++q) mean_t1 += calib.qubits[static_cast<size_t>(q)].t1_us;
    mean_t1 /= static_cast<double>(c.num_qubits);

    return -0.5 + 0.9 * std::log(1.0 + static_cast<double>(n_gates)) +
           1.2 * f.entanglement_ratio + 0.08 * static_cast<double>(f.depth) +
           0.6 * f.liveness + 0.1 * static_cast<double>(f.num_qubits) + 0.4 * (mean_t1 / 300.0) +
           0.3 * f.parallelism;
}

std::string config_json() {
    return R"({
  "seed": 42,
  "registry_global": "registry_global.txt",
  "registry_node": "registry_node.txt",
  "corpus_dir": "corpus",
  "calibration_dir": "calib",
  "manifest": "manifest.csv",
  "artifact_dir": "out",
  "target_space": "log_seconds",
  "alpha": 0.5,
  "shap_permutations": 20,
  "repeats": {"precision_percent": 25.0, "z": 1.96},
  "train": {"epochs": 500, "batch_size": 128, "learning_rate": 0.001}
}
)";
}

}  // namespace

void generate_synthetic_project(const std::string& out_dir, const SynthSpec& spec) {
    if (spec.circuits == 0) throw ContractError("synth: need at least one circuit");
    if (spec.backends < 1) throw ContractError("synth: need at least one backend");
    if (spec.min_qubits < 1 || spec.max_qubits < spec.min_qubits ||
        spec.min_gates < 0 || spec.max_gates < spec.min_gates)
        throw ContractError("synth: inconsistent size bounds");

    const GateRegistry& registry = default_global_registry();
    std::vector<GateKindId> one_q, two_q;
    for (int i = 0; i < registry.size(); ++i) {
        // Parameter-light kinds keep the corpus files compact.
        if (registry.at(i).param_count > 1) continue;
        (registry.at(i).arity == 1 ? one_q : two_q).push_back(i);
    }

    fs::create_directories(fs::path(out_dir) / "corpus");
    fs::create_directories(fs::path(out_dir) / "calib");

    Rng rng(spec.seed);

    std::vector<BackendCalibration> backends;
    for (int b = 0; b < spec.backends; ++b) {
        BackendCalibration calib;
        calib.backend_id = "synth_sim_" + std::to_string(b);
        std::string text = "backend_id," + calib.backend_id + "\n";
        text += "num_qubits," + std::to_string(spec.max_qubits) + "\n";
        for (int q = 0; q < spec.max_qubits; ++q) {
            QubitCalibration qc;
            qc.t1_us = rng.uniform(100.0, 400.0);
            qc.t2_us = rng.uniform(50.0, 250.0);
            calib.qubits.push_back(qc);
            text += std::to_string(q) + "," + format_double(qc.t1_us) + "," +
                    format_double(qc.t2_us) + "\n";
        }
        write_text_file((fs::path(out_dir) / "calib" / (calib.backend_id + ".calib")).string(),
                        text);
        backends.push_back(std::move(calib));
    }

    std::vector<TimingRecord> records;
    const int width = static_cast<int>(std::to_string(spec.circuits - 1).size());
    for (size_t i = 0; i < spec.circuits; ++i) {
        std::string num = std::to_string(i);
        num.insert(0, static_cast<size_t>(width) - num.size(), '0');
        const std::string id = "synth_" + num;

        Circuit c = random_circuit(rng, registry, spec, one_q, two_q);
        c.name = id;
        write_text_file((fs::path(out_dir) / "corpus" / (id + ".qasm")).string(),
                        to_qasm(c, registry));

        GlobalFeatures f = global_features(c, registry);
        for (const BackendCalibration& calib : backends) {
            double log_t = true_log_time(c, f, calib);
            TimingRecord rec;
            rec.circuit_id = id;
            rec.backend_id = calib.backend_id;
            rec.shots = spec.shots;
            for (int r = 0; r < spec.repeats; ++r) {
                rec.repeats.push_back(std::exp(log_t + spec.noise * rng.normal()));
            }
            records.push_back(std::move(rec));
        }
    }

    write_text_file((fs::path(out_dir) / "manifest.csv").string(), manifest_to_text(records));
    write_text_file((fs::path(out_dir) / "registry_global.txt").string(),
                    default_global_registry().to_text());
    write_text_file((fs::path(out_dir) / "registry_node.txt").string(),
                    default_node_registry().to_text());
    write_text_file((fs::path(out_dir) / "qtime.json").string(), config_json());
}

}  // namespace qtime
