#pragma once

#include <string>
#include <vector>

#include "qtime/node_features.hpp"

namespace qtime {

/// One fully-featured training point: extracted features plus the measured
/// target (mean of the repeat measurements, seconds, > 0).
struct LabeledSample {
    std::string circuit_id;
    std::string backend_id;
    std::vector<double> global;  // GlobalFeatures::to_vector()
    GraphSample graph;
    double target_seconds = 0;

    std::string key() const { return circuit_id + "@" + backend_id; }
};

}  // namespace qtime
