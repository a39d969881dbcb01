#pragma once

#include <string>
#include <vector>

namespace qtime {

struct QubitCalibration {
    double t1_us = 0;  // relaxation time, microseconds
    double t2_us = 0;  // dephasing time, microseconds
};

/// Per-qubit T1/T2 for one backend. Simulator backends use the same format as
/// hardware backends.
struct BackendCalibration {
    std::string backend_id;
    std::vector<QubitCalibration> qubits;

    int num_qubits() const { return static_cast<int>(qubits.size()); }

    /// Loads a calibration file: `backend_id,<id>` and optional
    /// `num_qubits,<n>` records followed by `index,t1_us,t2_us` rows with
    /// contiguous ascending indices. T1/T2 must be finite and positive.
    static BackendCalibration load(const std::string& path);
};

}  // namespace qtime
