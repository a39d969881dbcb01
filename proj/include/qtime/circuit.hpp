#pragma once

#include <array>
#include <string>
#include <vector>

#include "qtime/gate_registry.hpp"

namespace qtime {

/// One gate application or measurement.
struct GateOp {
    static constexpr GateKindId kMeasure = -1;

    GateKindId kind = kMeasure;
    std::array<int, 2> qubits{-1, -1};
    int arity = 1;  // number of operand qubits actually used (1 or 2)
    std::vector<double> params;
    int clbit = -1;  // classical target; measurements only

    bool is_measure() const { return kind == kMeasure; }
    bool operator==(const GateOp&) const = default;
};

/// Gate-level IR of one quantum program. `ops` is in program order, which is
/// a valid topological order of the induced DAG.
struct Circuit {
    std::string name;
    int num_qubits = 0;
    int num_clbits = 0;
    std::vector<GateOp> ops;

    bool operator==(const Circuit&) const = default;

    /// Checks the structural invariants (operand ranges, measure shape,
    /// distinct 2-qubit operands). Throws ContractError on violation.
    void validate(const GateRegistry& registry) const;
};

/// Longest dependency chain under as-soon-as-possible layering; measurements
/// occupy layers like any other op. Empty circuit has depth 0.
int depth(const Circuit& circuit);

/// Per-op ASAP layer numbers, 1-based; layer[i] corresponds to ops[i].
std::vector<int> asap_layers(const Circuit& circuit);

/// Canonical OpenQASM 2.0 rendering; debug helper used by the
/// parse -> serialize -> parse fixpoint check.
std::string to_qasm(const Circuit& circuit, const GateRegistry& registry);

}  // namespace qtime
