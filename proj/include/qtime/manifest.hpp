#pragma once

#include <string>
#include <vector>

namespace qtime {

/// Measured execution times for one circuit on one backend.
struct TimingRecord {
    std::string circuit_id;
    std::string backend_id;
    long shots = 0;
    std::vector<double> repeats;  // execution times, seconds, all > 0

    double mean_seconds() const;
    double stdev_seconds() const;  // sample standard deviation (n-1); 0 for n=1
};

/// Loads a timing manifest: comma-separated, header
/// `circuit_id,backend_id,shots,t1_s,t2_s,...` with a variable number of
/// repeat columns per row. Duplicate (circuit_id, backend_id) rows are merged
/// by concatenating repeats in file order. Malformed rows and nonpositive
/// times are reported with their line number.
std::vector<TimingRecord> load_manifest(const std::string& path);

std::string manifest_header(size_t max_repeats);

/// Serializes records back to manifest text (used by the synthetic pipeline).
std::string manifest_to_text(const std::vector<TimingRecord>& records);

}  // namespace qtime
