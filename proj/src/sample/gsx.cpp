#include "qtime/gsx.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

#include "qtime/errors.hpp"

namespace qtime {
namespace {

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double ss = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        ss += d * d;
    }
    return std::sqrt(ss);
}

void check_pool(const CandidatePool& pool) {
    if (pool.items.empty()) throw ContractError("gsx: empty pool");
    if (!(pool.alpha >= 0.0 && pool.alpha <= 1.0))
        throw ContractError("gsx: alpha must lie in [0, 1]");
    const size_t gd = pool.items.front().global_vec.size();
    const size_t rd = pool.items.front().graph_vec.size();
    std::unordered_set<std::string> ids;
    for (const PoolItem& item : pool.items) {
        if (item.global_vec.size() != gd || item.graph_vec.size() != rd)
            throw ContractError("gsx: inconsistent feature dimensions in pool");
        if (!ids.insert(item.id).second)
            throw ContractError("gsx: duplicate pool id '" + item.id + "'");
    }
}

}  // namespace

double blended_distance(const PoolItem& a, const PoolItem& b, double alpha) {
    if (a.global_vec.size() != b.global_vec.size() || a.graph_vec.size() != b.graph_vec.size())
        throw ContractError("blended_distance: dimension mismatch");
    return alpha * euclid(a.global_vec, b.global_vec) +
           (1.0 - alpha) * euclid(a.graph_vec, b.graph_vec);
}

SelectionResult gsx_select(const CandidatePool& pool, size_t k) {
    check_pool(pool);
    const size_t n = pool.items.size();
    if (k < 1 || k > n) throw ContractError("gsx: K must lie in [1, pool size]");

    // Centroid of the blended feature space, computed per part.
    PoolItem centroid;
    centroid.global_vec.assign(pool.items.front().global_vec.size(), 0.0);
    centroid.graph_vec.assign(pool.items.front().graph_vec.size(), 0.0);
    for (const PoolItem& item : pool.items) {
        for (size_t c = 0; c < centroid.global_vec.size(); ++c)
            centroid.global_vec[c] += item.global_vec[c];
        for (size_t c = 0; c < centroid.graph_vec.size(); ++c)
            centroid.graph_vec[c] += item.graph_vec[c];
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (double& v : centroid.global_vec) v *= inv;
    for (double& v : centroid.graph_vec) v *= inv;

    std::vector<bool> selected(n, false);
    SelectionResult result;
    result.selected_ids.reserve(k);
    result.distances_at_selection.reserve(k);

    size_t first = n;
    double first_dist = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        double d = blended_distance(pool.items[i], centroid, pool.alpha);
        if (d < first_dist ||
            (d == first_dist && pool.items[i].id < pool.items[first].id)) {
            first = i;
            first_dist = d;
        }
    }
    selected[first] = true;
    result.selected_ids.push_back(pool.items[first].id);
    result.distances_at_selection.push_back(first_dist);

    // Min distance from each unlabeled item to the selected set, refreshed
    // incrementally after every pick.
    std::vector<double> dmin(n, std::numeric_limits<double>::infinity());
    size_t last_pick = first;
    for (size_t pick = 1; pick < k; ++pick) {
        size_t best = n;
        double best_d = -1.0;
        for (size_t i = 0; i < n; ++i) {
            if (selected[i]) continue;
            double d = blended_distance(pool.items[i], pool.items[last_pick], pool.alpha);
            if (d < dmin[i]) dmin[i] = d;
            if (dmin[i] > best_d ||
                (dmin[i] == best_d && pool.items[i].id < pool.items[best].id)) {
                best = i;
                best_d = dmin[i];
            }
        }
        selected[best] = true;
        result.selected_ids.push_back(pool.items[best].id);
        result.distances_at_selection.push_back(best_d);
        last_pick = best;
    }
    return result;
}

}  // namespace qtime
