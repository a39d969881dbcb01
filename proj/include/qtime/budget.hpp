#pragma once

namespace qtime {

/// Sample size for a finite population at p = 0.5:
///   n0 = z^2 * 0.25 / m^2,  n = ceil(n0 / (1 + (n0 - 1) / N))
/// with z the normal critical value for the two-sided confidence level and m
/// the margin as a fraction. Inputs are percentages (e.g. 95, 5).
long plan_budget(long population, double confidence_percent, double margin_percent);

}  // namespace qtime
