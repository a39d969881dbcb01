#pragma once

#include <string>

#include "qtime/circuit.hpp"
#include "qtime/gate_registry.hpp"

namespace qtime {

/// Parses an OpenQASM 2.0 program restricted to: `qreg`/`creg` declarations,
/// applications of registry gates, `measure`, and `barrier` (ignored).
/// `include` and the version header are accepted and skipped. Anything beyond
/// the subset (`gate` definitions, `if`, `opaque`, `reset`) is a hard
/// ParseError, as is any gate name absent from the registry.
Circuit parse_qasm(const std::string& text, const GateRegistry& registry,
                   const std::string& name = "");

}  // namespace qtime
