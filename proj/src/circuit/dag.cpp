#include "qtime/dag.hpp"

namespace qtime {

CircuitDag to_dag(const Circuit& circuit) {
    CircuitDag dag;
    dag.num_qubits = circuit.num_qubits;
    dag.nodes.reserve(static_cast<size_t>(circuit.num_qubits) + circuit.ops.size());

    std::vector<int> last_on_wire(static_cast<size_t>(circuit.num_qubits));
    for (int q = 0; q < circuit.num_qubits; ++q) {
        DagNode node;
        node.kind = DagNodeKind::InitialQubit;
        node.qubits[0] = q;
        node.arity = 1;
        node.topo_index = q;
        dag.nodes.push_back(node);
        last_on_wire[static_cast<size_t>(q)] = q;
    }

    for (const GateOp& op : circuit.ops) {
        DagNode node;
        node.kind = op.is_measure() ? DagNodeKind::Measure : DagNodeKind::Gate;
        node.gate_kind = op.is_measure() ? -1 : op.kind;
        node.qubits = op.qubits;
        node.arity = op.arity;
        node.topo_index = static_cast<int>(dag.nodes.size());
        for (int s = 0; s < op.arity; ++s) {
            int wire = op.qubits[static_cast<size_t>(s)];
            dag.edges.emplace_back(last_on_wire[static_cast<size_t>(wire)], node.topo_index);
            last_on_wire[static_cast<size_t>(wire)] = node.topo_index;
        }
        dag.nodes.push_back(node);
    }
    return dag;
}

std::vector<std::vector<int>> in_neighbors(const CircuitDag& dag) {
    std::vector<std::vector<int>> adj(dag.nodes.size());
    for (const auto& [src, dst] : dag.edges) {
        adj[static_cast<size_t>(dst)].push_back(src);
    }
    return adj;
}

}  // namespace qtime
