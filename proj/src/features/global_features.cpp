#include "qtime/global_features.hpp"

#include <algorithm>
#include <set>

#include "qtime/dag.hpp"
#include "qtime/errors.hpp"

namespace qtime {
namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

bool is_two_qubit_gate(const GateOp& op) { return !op.is_measure() && op.arity == 2; }

/// Fraction of two-qubit gates lying on the longest dependency chain.
/// Longest is by op count; among equally long chains the one with the most
/// two-qubit gates decides (lexicographic DP over the wire DAG).
double critical_depth_metric(const Circuit& circuit, int64_t two_qubit_total) {
    if (two_qubit_total == 0) return 0.0;
    struct Best {
        int len = 0;
        int64_t twoq = 0;
    };
    std::vector<Best> wire_best(static_cast<size_t>(circuit.num_qubits));
    Best overall;
    for (const GateOp& op : circuit.ops) {
        Best incoming;
        for (int s = 0; s < op.arity; ++s) {
            const Best& w = wire_best[static_cast<size_t>(op.qubits[static_cast<size_t>(s)])];
            if (w.len > incoming.len || (w.len == incoming.len && w.twoq > incoming.twoq))
                incoming = w;
        }
        Best here{incoming.len + 1, incoming.twoq + (is_two_qubit_gate(op) ? 1 : 0)};
        for (int s = 0; s < op.arity; ++s) {
            wire_best[static_cast<size_t>(op.qubits[static_cast<size_t>(s)])] = here;
        }
        if (here.len > overall.len || (here.len == overall.len && here.twoq > overall.twoq))
            overall = here;
    }
    return static_cast<double>(overall.twoq) / static_cast<double>(two_qubit_total);
}

}  // namespace

GlobalFeatures global_features(const Circuit& circuit, const GateRegistry& global_registry,
                               const GateRegistry* parsed_with) {
    GlobalFeatures f;
    f.gate_counts.assign(static_cast<size_t>(global_registry.size()), 0);
    f.num_qubits = circuit.num_qubits;
    f.depth = depth(circuit);

    int64_t n_gates = 0;
    int64_t n_twoq = 0;
    std::vector<std::set<int>> partners(static_cast<size_t>(circuit.num_qubits));

    for (const GateOp& op : circuit.ops) {
        if (op.is_measure()) continue;
        GateKindId slot = op.kind;
        if (parsed_with != nullptr) {
            const std::string& name = parsed_with->at(op.kind).name;
            auto mapped = global_registry.find(name);
            if (!mapped)
                throw ContractError("gate '" + name + "' is not in the global feature registry");
            slot = *mapped;
        } else if (slot < 0 || slot >= global_registry.size()) {
            throw ContractError("gate kind id out of range for the global feature registry");
        }
        ++f.gate_counts[static_cast<size_t>(slot)];
        ++n_gates;
        if (op.arity == 2) {
            ++n_twoq;
            partners[static_cast<size_t>(op.qubits[0])].insert(op.qubits[1]);
            partners[static_cast<size_t>(op.qubits[1])].insert(op.qubits[0]);
        }
    }

    if (n_gates == 0) return f;  // degenerate circuits keep all-zero metrics

    const int n = circuit.num_qubits;
    if (n > 1) {
        int64_t degree_sum = 0;
        for (const auto& p : partners) degree_sum += static_cast<int64_t>(p.size());
        f.program_communication =
            static_cast<double>(degree_sum) / (static_cast<double>(n) * (n - 1));
    }

    f.critical_depth = critical_depth_metric(circuit, n_twoq);
    f.entanglement_ratio = static_cast<double>(n_twoq) / static_cast<double>(n_gates);

    if (n > 1 && f.depth > 0) {
        f.parallelism =
            clamp01((static_cast<double>(n_gates) / f.depth - 1.0) / (static_cast<double>(n) - 1.0));
    }

    if (f.depth > 0) {
        // Liveness matrix entry (q, layer) is 1 iff the qubit hosts a gate in
        // that ASAP layer; measurement layers contribute columns but no ones.
        std::vector<int> layers = asap_layers(circuit);
        std::set<std::pair<int, int>> live;
        for (size_t i = 0; i < circuit.ops.size(); ++i) {
            const GateOp& op = circuit.ops[i];
            if (op.is_measure()) continue;
            for (int s = 0; s < op.arity; ++s) {
                live.emplace(op.qubits[static_cast<size_t>(s)], layers[i]);
            }
        }
        f.liveness = static_cast<double>(live.size()) /
                     (static_cast<double>(n) * static_cast<double>(f.depth));
    }
    return f;
}

std::vector<double> GlobalFeatures::to_vector() const {
    std::vector<double> v;
    v.reserve(dimension());
    for (int64_t c : gate_counts) v.push_back(static_cast<double>(c));
    v.push_back(static_cast<double>(num_qubits));
    v.push_back(static_cast<double>(depth));
    v.push_back(program_communication);
    v.push_back(critical_depth);
    v.push_back(entanglement_ratio);
    v.push_back(parallelism);
    v.push_back(liveness);
    return v;
}

std::vector<std::string> global_feature_names(const GateRegistry& global_registry) {
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(global_registry.size()) + 7);
    for (const GateKind& g : global_registry.entries()) names.push_back("gate_" + g.name);
    names.insert(names.end(), {"num_qubits", "depth", "program_communication", "critical_depth",
                               "entanglement_ratio", "parallelism", "liveness"});
    return names;
}

}  // namespace qtime
