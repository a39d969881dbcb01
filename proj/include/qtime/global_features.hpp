#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtime/circuit.hpp"
#include "qtime/gate_registry.hpp"

namespace qtime {

/// Fixed-length circuit summary: one count slot per global-registry gate plus
/// seven scalar metrics. Dimensionality = |registry| + 7 (41 by default).
struct GlobalFeatures {
    std::vector<int64_t> gate_counts;
    int num_qubits = 0;
    int depth = 0;
    double program_communication = 0;
    double critical_depth = 0;
    double entanglement_ratio = 0;
    double parallelism = 0;
    double liveness = 0;

    size_t dimension() const { return gate_counts.size() + 7; }

    /// Flattened feature vector: counts in registry order, then num_qubits,
    /// depth, program_communication, critical_depth, entanglement_ratio,
    /// parallelism, liveness.
    std::vector<double> to_vector() const;
};

/// Computes counts and metrics for a circuit.
///
/// Measurements are excluded from gate counts and the five ratio metrics but
/// occupy layers for depth. Circuits with no ops yield all-zero features.
/// `parsed_with` names the registry the circuit's kind ids refer to, when it
/// differs from the global registry; gates missing from the global registry
/// are an error.
GlobalFeatures global_features(const Circuit& circuit, const GateRegistry& global_registry,
                               const GateRegistry* parsed_with = nullptr);

/// Column names for the feature table header, in to_vector() order.
std::vector<std::string> global_feature_names(const GateRegistry& global_registry);

}  // namespace qtime
