#pragma once

#include <vector>

namespace qtime {

struct SpearmanResult {
    double rho = 0;      // in [-1, 1]
    double p_value = 1;  // two-sided, t-approximation
};

/// Spearman rank correlation on average ranks (ties share their mean rank).
/// Requires equal lengths >= 3 and non-constant inputs.
SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Average ranks (1-based, ties averaged); exposed for rank-based checks.
std::vector<double> average_ranks(const std::vector<double>& values);

}  // namespace qtime
