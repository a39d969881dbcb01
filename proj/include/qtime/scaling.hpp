#pragma once

#include <optional>
#include <span>
#include <vector>

namespace qtime {

/// Per-dimension fitted [min, max] ranges for min-max scaling. Immutable after
/// fitting; reused to transform held-out data with the training-set ranges.
struct MinMaxRanges {
    std::vector<double> mins;
    std::vector<double> maxs;

    size_t dimension() const { return mins.size(); }
};

/// Scales each row to (x - min) / (max - min) per dimension. When `fitted` is
/// absent, ranges are fitted on `rows` first and returned alongside the
/// scaled data. Constant dimensions map to 0. Out-of-range held-out values
/// pass through unclamped.
std::pair<std::vector<std::vector<double>>, MinMaxRanges> minmax_scale(
    const std::vector<std::vector<double>>& rows, std::optional<MinMaxRanges> fitted = {});

/// Range fitting / application over flat row-major buffers, used for node
/// feature matrices where rows of many graphs share one range set.
MinMaxRanges fit_minmax(std::span<const double> data, size_t cols);
void accumulate_minmax(MinMaxRanges& ranges, std::span<const double> data, size_t cols);
void apply_minmax(std::span<double> data, size_t cols, const MinMaxRanges& ranges);

}  // namespace qtime
