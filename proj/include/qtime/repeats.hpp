#pragma once

namespace qtime {

/// Minimum number of repeated measurements needed to pin the mean execution
/// time within +/- r percent at the given normal critical value:
///   n = ceil( ((100 * z * s) / (r * mean))^2 ), at least 1.
/// mean > 0, s >= 0, r > 0, z > 0; violations throw ContractError.
long min_repeats(double mean, double stdev, double precision_percent, double z);

}  // namespace qtime
