#pragma once

#include <span>
#include <string>
#include <vector>

#include "qtime/calibration.hpp"
#include "qtime/dag.hpp"
#include "qtime/gate_registry.hpp"

namespace qtime {

/// Node feature layout constants. Each row spans 178 entries:
///   [0, 46)    node-type one-hot: slot 0 initial qubit, slot 1 measurement,
///              slot 2+k the k-th node-registry gate (up to 44 gate kinds)
///   [46, 173)  qubit-position indicators over 127 qubit slots
///   [173, 177) T1/T2 for the primary qubit then the secondary qubit
///   [177]      node index (raw topological position)
/// Entries that do not apply to a node are exactly zero.
inline constexpr int kNodeTypeSlots = 46;
inline constexpr int kMaxQubits = 127;
inline constexpr int kCalibOffset = kNodeTypeSlots + kMaxQubits;  // 173
inline constexpr int kNodeIndexSlot = kCalibOffset + 4;           // 177
inline constexpr int kNodeFeatureDim = kNodeIndexSlot + 1;        // 178

struct NodeFeatureMatrix {
    size_t rows = 0;
    size_t cols = kNodeFeatureDim;
    std::vector<double> data;  // row-major

    std::span<double> row(size_t r) { return {data.data() + r * cols, cols}; }
    std::span<const double> row(size_t r) const { return {data.data() + r * cols, cols}; }
};

/// One circuit-on-backend input to the regressor and the sampling pool.
struct GraphSample {
    NodeFeatureMatrix node_features;
    std::vector<std::pair<int, int>> adjacency;  // edge list from the DAG
    std::string circuit_id;
    std::string backend_id;
};

/// Builds the n x 178 matrix for a DAG against one backend's calibration.
/// Errors: more than 127 qubits, a qubit without calibration, or a node
/// registry too large for the one-hot block.
NodeFeatureMatrix node_features(const CircuitDag& dag, const BackendCalibration& calib,
                                const GateRegistry& node_registry);

GraphSample make_graph_sample(const CircuitDag& dag, const BackendCalibration& calib,
                              const GateRegistry& node_registry, std::string circuit_id);

/// Column-wise arithmetic mean over nodes; the fixed-size graph embedding used
/// for sampling distances. Errors on an empty matrix.
std::vector<double> pooled_graph_vector(const NodeFeatureMatrix& m);

}  // namespace qtime
