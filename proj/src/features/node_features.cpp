#include "qtime/node_features.hpp"

#include "qtime/errors.hpp"

namespace qtime {

NodeFeatureMatrix node_features(const CircuitDag& dag, const BackendCalibration& calib,
                                const GateRegistry& node_registry) {
    if (node_registry.size() > kNodeTypeSlots - 2)
        throw ContractError("node registry exceeds the " +
                            std::to_string(kNodeTypeSlots - 2) + "-gate one-hot block");
    if (dag.num_qubits > kMaxQubits)
        throw ContractError("circuit uses " + std::to_string(dag.num_qubits) +
                            " qubits; the encoding caps at " + std::to_string(kMaxQubits));
    if (dag.num_qubits > calib.num_qubits())
        throw ContractError("backend '" + calib.backend_id + "' calibrates " +
                            std::to_string(calib.num_qubits()) + " qubits; circuit needs " +
                            std::to_string(dag.num_qubits));

    NodeFeatureMatrix m;
    m.rows = dag.nodes.size();
    m.data.assign(m.rows * m.cols, 0.0);

    for (size_t i = 0; i < dag.nodes.size(); ++i) {
        const DagNode& node = dag.nodes[i];
        auto row = m.row(i);
        switch (node.kind) {
            case DagNodeKind::InitialQubit: row[0] = 1.0; break;
            case DagNodeKind::Measure: row[1] = 1.0; break;
            case DagNodeKind::Gate: row[static_cast<size_t>(2 + node.gate_kind)] = 1.0; break;
        }
        for (int s = 0; s < node.arity; ++s) {
            int q = node.qubits[static_cast<size_t>(s)];
            row[static_cast<size_t>(kNodeTypeSlots + q)] = 1.0;
            const QubitCalibration& qc = calib.qubits[static_cast<size_t>(q)];
            row[static_cast<size_t>(kCalibOffset + 2 * s)] = qc.t1_us;
            row[static_cast<size_t>(kCalibOffset + 2 * s + 1)] = qc.t2_us;
        }
        row[kNodeIndexSlot] = static_cast<double>(node.topo_index);
    }
    return m;
}

GraphSample make_graph_sample(const CircuitDag& dag, const BackendCalibration& calib,
                              const GateRegistry& node_registry, std::string circuit_id) {
    GraphSample s;
    s.node_features = node_features(dag, calib, node_registry);
    s.adjacency = dag.edges;
    s.circuit_id = std::move(circuit_id);
    s.backend_id = calib.backend_id;
    return s;
}

std::vector<double> pooled_graph_vector(const NodeFeatureMatrix& m) {
    if (m.rows == 0) throw ContractError("pooled_graph_vector: empty node matrix");
    std::vector<double> mean(m.cols, 0.0);
    for (size_t r = 0; r < m.rows; ++r) {
        auto row = m.row(r);
        for (size_t c = 0; c < m.cols; ++c) mean[c] += row[c];
    }
    const double inv = 1.0 / static_cast<double>(m.rows);
    for (double& v : mean) v *= inv;
    return mean;
}

}  // namespace qtime
