#include "qtime/circuit.hpp"

#include <algorithm>
#include <sstream>

#include "qtime/errors.hpp"
#include "qtime/textio.hpp"

namespace qtime {

void Circuit::validate(const GateRegistry& registry) const {
    for (size_t i = 0; i < ops.size(); ++i) {
        const GateOp& op = ops[i];
        const std::string where = "op " + std::to_string(i);
        if (op.arity != 1 && op.arity != 2) throw ContractError(where + ": bad arity");
        for (int s = 0; s < op.arity; ++s) {
            if (op.qubits[static_cast<size_t>(s)] < 0 ||
                op.qubits[static_cast<size_t>(s)] >= num_qubits)
                throw ContractError(where + ": qubit index out of range");
        }
        if (op.arity == 2 && op.qubits[0] == op.qubits[1])
            throw ContractError(where + ": duplicate operand qubits");
        if (op.is_measure()) {
            if (op.arity != 1) throw ContractError(where + ": measure must have one qubit");
            if (op.clbit < 0 || op.clbit >= num_clbits)
                throw ContractError(where + ": classical target out of range");
        } else {
            if (op.kind < 0 || op.kind >= registry.size())
                throw ContractError(where + ": unknown gate kind id");
            const GateKind& g = registry.at(op.kind);
            if (g.arity != op.arity) throw ContractError(where + ": arity mismatch for " + g.name);
            if (static_cast<int>(op.params.size()) != g.param_count)
                throw ContractError(where + ": param count mismatch for " + g.name);
            if (op.clbit != -1) throw ContractError(where + ": gate with classical target");
        }
    }
}

std::vector<int> asap_layers(const Circuit& circuit) {
    std::vector<int> wire_layer(static_cast<size_t>(circuit.num_qubits), 0);
    std::vector<int> layers;
    layers.reserve(circuit.ops.size());
    for (const GateOp& op : circuit.ops) {
        int ready = 0;
        for (int s = 0; s < op.arity; ++s) {
            ready = std::max(ready, wire_layer[static_cast<size_t>(op.qubits[static_cast<size_t>(s)])]);
        }
        int layer = ready + 1;
        for (int s = 0; s < op.arity; ++s) {
            wire_layer[static_cast<size_t>(op.qubits[static_cast<size_t>(s)])] = layer;
        }
        layers.push_back(layer);
    }
    return layers;
}

int depth(const Circuit& circuit) {
    int d = 0;
    for (int layer : asap_layers(circuit)) d = std::max(d, layer);
    return d;
}

std::string to_qasm(const Circuit& circuit, const GateRegistry& registry) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\n";
    out << "qreg q[" << circuit.num_qubits << "];\n";
    if (circuit.num_clbits > 0) out << "creg c[" << circuit.num_clbits << "];\n";
    for (const GateOp& op : circuit.ops) {
        if (op.is_measure()) {
            out << "measure q[" << op.qubits[0] << "] -> c[" << op.clbit << "];\n";
            continue;
        }
        out << registry.at(op.kind).name;
        if (!op.params.empty()) {
            out << "(";
            for (size_t i = 0; i < op.params.size(); ++i) {
                if (i > 0) out << ",";
                out << format_double(op.params[i]);
            }
            out << ")";
        }
        out << " q[" << op.qubits[0] << "]";
        if (op.arity == 2) out << ",q[" << op.qubits[1] << "]";
        out << ";\n";
    }
    return out.str();
}

}  // namespace qtime
