#pragma once

#include <array>
#include <utility>
#include <vector>

#include "qtime/circuit.hpp"

namespace qtime {

enum class DagNodeKind { InitialQubit, Gate, Measure };

struct DagNode {
    DagNodeKind kind = DagNodeKind::Gate;
    GateKindId gate_kind = -1;  // registry id when kind == Gate
    std::array<int, 2> qubits{-1, -1};
    int arity = 1;
    int topo_index = 0;  // equals the node's position in CircuitDag::nodes

    bool operator==(const DagNode&) const = default;
};

/// DAG of per-qubit wire dependencies: one InitialQubit node per qubit, then
/// op nodes in program order. Each op node has one in-edge per operand qubit,
/// from the previous node on that wire; node order is a topological order.
/// Edge list order is intrinsic (program order, operand slot order), so
/// downstream per-node reductions that walk it are label-independent.
struct CircuitDag {
    int num_qubits = 0;
    std::vector<DagNode> nodes;
    std::vector<std::pair<int, int>> edges;  // (src, dst) indices into nodes

    bool operator==(const CircuitDag&) const = default;
};

CircuitDag to_dag(const Circuit& circuit);

/// In-neighbor lists in edge-list order; index i lists predecessors of node i.
std::vector<std::vector<int>> in_neighbors(const CircuitDag& dag);

}  // namespace qtime
