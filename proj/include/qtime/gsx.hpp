#pragma once

#include <string>
#include <vector>

namespace qtime {

/// One candidate circuit-on-backend pair: min-max normalized global features
/// and the normalized pooled graph embedding.
struct PoolItem {
    std::string id;
    std::vector<double> global_vec;  // 41 dims by default
    std::vector<double> graph_vec;   // 178 dims by default
};

struct CandidatePool {
    std::vector<PoolItem> items;
    double alpha = 0.5;  // weight of the global-feature distance
};

/// alpha * ||a.global - b.global||_2 + (1 - alpha) * ||a.graph - b.graph||_2.
double blended_distance(const PoolItem& a, const PoolItem& b, double alpha);

struct SelectionResult {
    std::vector<std::string> selected_ids;  // in selection order
    /// Per pick: the blended distance that decided it. Entry 0 is the
    /// distance to the pool centroid; later entries are the max-min distance
    /// to the already-selected set and are nonincreasing.
    std::vector<double> distances_at_selection;
};

/// Greedy sampling on the input domain. The first pick is the item nearest
/// the per-part pool centroid; every later pick maximizes the minimum blended
/// distance to the selected set. Ties break to the lexicographically lowest
/// id, making the selection deterministic and independent of pool order.
SelectionResult gsx_select(const CandidatePool& pool, size_t k);

}  // namespace qtime
