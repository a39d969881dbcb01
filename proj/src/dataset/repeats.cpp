#include "qtime/repeats.hpp"

#include <cmath>

#include "qtime/errors.hpp"

namespace qtime {

long min_repeats(double mean, double stdev, double precision_percent, double z) {
    if (!(mean > 0)) throw ContractError("min_repeats: mean must be positive");
    if (!(stdev >= 0)) throw ContractError("min_repeats: stdev must be nonnegative");
    if (!(precision_percent > 0)) throw ContractError("min_repeats: precision must be positive");
    if (!(z > 0)) throw ContractError("min_repeats: critical value must be positive");
    double ratio = (100.0 * z * stdev) / (precision_percent * mean);
    double n = std::ceil(ratio * ratio);
    return n < 1.0 ? 1 : static_cast<long>(n);
}

}  // namespace qtime
