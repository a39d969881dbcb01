#include "qtime/scaling.hpp"

#include <limits>

#include "qtime/errors.hpp"

namespace qtime {

MinMaxRanges fit_minmax(std::span<const double> data, size_t cols) {
    MinMaxRanges r;
    r.mins.assign(cols, std::numeric_limits<double>::infinity());
    r.maxs.assign(cols, -std::numeric_limits<double>::infinity());
    accumulate_minmax(r, data, cols);
    return r;
}

void accumulate_minmax(MinMaxRanges& ranges, std::span<const double> data, size_t cols) {
    if (ranges.dimension() != cols) throw ContractError("minmax: dimension mismatch");
    if (data.size() % cols != 0) throw ContractError("minmax: ragged data");
    for (size_t i = 0; i < data.size(); ++i) {
        size_t c = i % cols;
        if (data[i] < ranges.mins[c]) ranges.mins[c] = data[i];
        if (data[i] > ranges.maxs[c]) ranges.maxs[c] = data[i];
    }
}

void apply_minmax(std::span<double> data, size_t cols, const MinMaxRanges& ranges) {
    if (ranges.dimension() != cols) throw ContractError("minmax: dimension mismatch");
    if (data.size() % cols != 0) throw ContractError("minmax: ragged data");
    for (size_t i = 0; i < data.size(); ++i) {
        size_t c = i % cols;
        double span = ranges.maxs[c] - ranges.mins[c];
        data[i] = span > 0 ? (data[i] - ranges.mins[c]) / span : 0.0;
    }
}

std::pair<std::vector<std::vector<double>>, MinMaxRanges> minmax_scale(
    const std::vector<std::vector<double>>& rows, std::optional<MinMaxRanges> fitted) {
    if (rows.empty()) throw ContractError("minmax_scale: no rows");
    const size_t cols = rows.front().size();
    for (const auto& row : rows) {
        if (row.size() != cols) throw ContractError("minmax_scale: ragged rows");
    }

    MinMaxRanges ranges;
    if (fitted) {
        ranges = std::move(*fitted);
        if (ranges.dimension() != cols) throw ContractError("minmax_scale: dimension mismatch");
    } else {
        ranges.mins.assign(cols, std::numeric_limits<double>::infinity());
        ranges.maxs.assign(cols, -std::numeric_limits<double>::infinity());
        for (const auto& row : rows) accumulate_minmax(ranges, row, cols);
    }

    std::vector<std::vector<double>> scaled = rows;
    for (auto& row : scaled) apply_minmax(row, cols, ranges);
    return {std::move(scaled), std::move(ranges)};
}

}  // namespace qtime
